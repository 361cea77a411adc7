//! The two-qubit Heisenberg XXZ Hamiltonian under a possibly inhomogeneous
//! longitudinal field, together with its closed-form eigensystem.
//!
//! The model is
//!
//! ```text
//! H = ½ [ J (σ₁ˣσ₂ˣ + σ₁ʸσ₂ʸ + λ σ₁ᶻσ₂ᶻ) + (B + b) σ₁ᶻ + (B − b) σ₂ᶻ ]
//! ```
//!
//! with planar coupling `J ≠ 0`, anisotropy `λ`, uniform field `B ≥ 0` and
//! field imbalance `b`. In the frozen basis the matrix is real symmetric with
//! a single mixing block on `{|01⟩, |10⟩}`, so the four eigenpairs have exact
//! closed forms in terms of `η = √(b² + J²)`, `ε = b − η`, `ζ = b + η`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::qlinalg::{Matrix4, State4};

/// The four real couplings defining the model.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ModelParams {
    coupling: f64,
    anisotropy: f64,
    field: f64,
    imbalance: f64,
}

impl ModelParams {
    /// Validates and stores `(J, λ, B, b)`.
    ///
    /// `J = 0` is rejected (the mixing block degenerates) and so is `B < 0`;
    /// a reversed uniform field is the same model with both spins flipped.
    pub fn new(coupling: f64, anisotropy: f64, field: f64, imbalance: f64) -> Result<Self> {
        for (name, value) in [
            ("J", coupling),
            ("lambda", anisotropy),
            ("B", field),
            ("b", imbalance),
        ] {
            if !value.is_finite() {
                return Err(Error::InvalidParams(format!("{name} = {value} is not finite")));
            }
        }
        if coupling == 0.0 {
            return Err(Error::InvalidParams("J must be nonzero".into()));
        }
        if field < 0.0 {
            return Err(Error::InvalidParams(format!("B = {field} must be >= 0")));
        }
        Ok(Self {
            coupling,
            anisotropy,
            field,
            imbalance,
        })
    }

    /// Homogeneous-field model (`B = b = 0`).
    pub fn homogeneous(coupling: f64, anisotropy: f64) -> Result<Self> {
        Self::new(coupling, anisotropy, 0.0, 0.0)
    }

    pub fn coupling(&self) -> f64 {
        self.coupling
    }

    pub fn anisotropy(&self) -> f64 {
        self.anisotropy
    }

    pub fn field(&self) -> f64 {
        self.field
    }

    pub fn imbalance(&self) -> f64 {
        self.imbalance
    }

    pub fn is_homogeneous(&self) -> bool {
        self.imbalance == 0.0
    }

    /// `η = √(b² + J²)`; strictly positive since `J ≠ 0`.
    pub fn eta(&self) -> f64 {
        self.imbalance.hypot(self.coupling)
    }

    /// `ε = b − η ≤ 0`, computed through `εζ = −J²` on the branch where the
    /// direct subtraction would cancel.
    pub fn eps(&self) -> f64 {
        if self.imbalance >= 0.0 {
            -(self.coupling * self.coupling) / (self.imbalance + self.eta())
        } else {
            self.imbalance - self.eta()
        }
    }

    /// `ζ = b + η ≥ 0`, with the same cancellation guard as [`Self::eps`].
    pub fn zeta(&self) -> f64 {
        if self.imbalance >= 0.0 {
            self.imbalance + self.eta()
        } else {
            -(self.coupling * self.coupling) / (self.imbalance - self.eta())
        }
    }

    /// The dimensionless imbalance `δ = b / J`.
    pub fn delta_ratio(&self) -> f64 {
        self.imbalance / self.coupling
    }
}

/// The four eigenpairs plus the derived scalars `η`, `ε`, `ζ`.
///
/// Ordering is fixed: `ψ₁ = |00⟩`, `ψ₂ = |11⟩`, then the two mixed states
/// with energies `−λJ/2 ∓ η`.
#[derive(Clone, Copy, Debug)]
pub struct Eigensystem {
    pub energies: [f64; 4],
    pub states: [State4; 4],
    pub eta: f64,
    pub eps: f64,
    pub zeta: f64,
}

/// Builds the Hamiltonian matrix in the frozen basis. All entries are real,
/// so the matrix is Hermitian exactly.
pub fn build_hamiltonian(p: &ModelParams) -> Matrix4 {
    let j = p.coupling();
    let zz = p.anisotropy() * j / 2.0;
    let mut h = Matrix4::zero();
    h.set(0, 0, Complex64::new(zz - p.field(), 0.0));
    h.set(3, 3, Complex64::new(zz + p.field(), 0.0));
    h.set(1, 1, Complex64::new(-zz - p.imbalance(), 0.0));
    h.set(2, 2, Complex64::new(-zz + p.imbalance(), 0.0));
    h.set(1, 2, Complex64::new(j, 0.0));
    h.set(2, 1, Complex64::new(j, 0.0));
    h
}

/// The closed-form eigensystem of [`build_hamiltonian`].
///
/// The mixed eigenvectors are `(ε|10⟩ + J|01⟩)/√(J²+ε²)` and
/// `(ζ|10⟩ + J|01⟩)/√(J²+ζ²)`; the `|01⟩` coefficient carries the sign of
/// `J`, which fixes the otherwise free global phase.
pub fn eigensystem(p: &ModelParams) -> Eigensystem {
    let j = p.coupling();
    let zz = p.anisotropy() * j / 2.0;
    let (eta, eps, zeta) = (p.eta(), p.eps(), p.zeta());

    let energies = [zz - p.field(), zz + p.field(), -zz - eta, -zz + eta];

    let mixed = |weight: f64| {
        let norm = j.hypot(weight);
        let mut amps = [Complex64::new(0.0, 0.0); 4];
        amps[2] = Complex64::new(weight / norm, 0.0);
        amps[1] = Complex64::new(j / norm, 0.0);
        State4::new(amps).expect("closed-form eigenvector is normalized")
    };

    Eigensystem {
        energies,
        states: [State4::basis(0), State4::basis(3), mixed(eps), mixed(zeta)],
        eta,
        eps,
        zeta,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hamiltonian_entries_isotropic_point() {
        let p = ModelParams::new(1.0, 1.0, 0.0, 0.0).unwrap();
        let h = build_hamiltonian(&p);
        assert_eq!(h.get(3, 3).re, 0.5);
        assert_eq!(h.get(0, 0).re, 0.5);
        assert_eq!(h.get(1, 1).re, -0.5);
        assert_eq!(h.get(2, 2).re, -0.5);
        assert_eq!(h.get(1, 2).re, 1.0);
        assert_eq!(h.hermiticity_error(), 0.0);
    }

    #[test]
    fn hamiltonian_entries_xx_point() {
        // λ = 0 removes the σᶻσᶻ term entirely.
        let p = ModelParams::new(1.0, 0.0, 2.0, 0.0).unwrap();
        let h = build_hamiltonian(&p);
        assert_eq!(h.get(3, 3).re, 2.0);
        assert_eq!(h.get(0, 0).re, -2.0);
    }

    #[test]
    fn eigensystem_golden_values() {
        let p = ModelParams::new(1.0, 0.5, 1.0, 0.0).unwrap();
        let es = eigensystem(&p);
        assert!((es.energies[0] + 0.75).abs() < 1e-15);
        assert!((es.energies[1] - 1.25).abs() < 1e-15);
        assert!((es.energies[2] + 1.25).abs() < 1e-15);
        assert!((es.energies[3] - 0.75).abs() < 1e-15);
        // ψ₃ = (−|10⟩ + |01⟩)/√2 at b = 0.
        let s = std::f64::consts::FRAC_1_SQRT_2;
        assert!((es.states[2].amp(2).re + s).abs() < 1e-15);
        assert!((es.states[2].amp(1).re - s).abs() < 1e-15);
    }

    #[test]
    fn eigensystem_three_four_five_triple() {
        let p = ModelParams::new(1.0, 1.0, 0.0, 0.75).unwrap();
        let es = eigensystem(&p);
        assert!((es.eta - 1.25).abs() < 1e-15);
        assert!((es.eps + 0.5).abs() < 1e-15);
        assert!((es.zeta - 2.0).abs() < 1e-15);
        assert!((es.states[2].amp(2).re + 0.4472).abs() < 1e-4);
        assert!((es.states[2].amp(1).re - 0.8944).abs() < 1e-4);
    }

    #[test]
    fn residual_and_orthonormality() {
        let p = ModelParams::new(-1.3, 0.8, 2.1, -0.6).unwrap();
        let h = build_hamiltonian(&p);
        let es = eigensystem(&p);
        for i in 0..4 {
            let hpsi = h.apply_amps(es.states[i].amps());
            let mut residual: f64 = 0.0;
            for (k, amp) in hpsi.iter().enumerate() {
                residual += (amp - es.states[i].amp(k) * es.energies[i]).norm_sqr();
            }
            assert!(residual.sqrt() < 1e-10);
            for jdx in 0..4 {
                let overlap = es.states[i].inner(&es.states[jdx]).norm();
                let expected = if i == jdx { 1.0 } else { 0.0 };
                assert!((overlap - expected).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn energies_sum_to_hamiltonian_trace() {
        let p = ModelParams::new(2.0, -1.5, 0.4, 0.9).unwrap();
        let es = eigensystem(&p);
        let sum: f64 = es.energies.iter().sum();
        let trace = build_hamiltonian(&p).trace();
        assert!((sum - trace.re).abs() < 1e-12);
        assert!(trace.im == 0.0);
    }

    #[test]
    fn rejects_degenerate_or_unphysical_params() {
        assert!(ModelParams::new(0.0, 1.0, 0.0, 0.0).is_err());
        assert!(ModelParams::new(1.0, 1.0, -0.1, 0.0).is_err());
        assert!(ModelParams::new(f64::NAN, 1.0, 0.0, 0.0).is_err());
    }

    #[test]
    fn small_coupling_keeps_identities_exact() {
        // ε and ζ are tied by εζ = −J²; the guarded evaluation keeps this
        // to machine precision even when |J| ≪ |b| would cancel.
        for (j, b) in [(1e-6, 2.0), (1e-6, -2.0), (3.0, 1e-8)] {
            let p = ModelParams::new(j, 1.0, 0.0, b).unwrap();
            let product = p.eps() * p.zeta();
            assert!(
                (product + j * j).abs() <= 1e-15 * j * j,
                "eps*zeta = {product}, expected {}",
                -j * j
            );
        }
    }
}
