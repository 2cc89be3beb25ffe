//! Complex linear algebra for bipartite measurement statistics in dimensions 2 and 3:
//! kets, orthonormal measurement bases, maximally entangled states, and Born-rule
//! joint outcome distributions.
//!
//! All inner products are conjugate-linear in the bra. Structural identities
//! (normalization, orthonormality) hold within [`AMPLITUDE_TOL`].

use crate::error::{Error, Result};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_1_SQRT_2, PI};

/// Tolerance for structural identities (norms, orthogonality, distribution sums).
pub const AMPLITUDE_TOL: f64 = 1e-12;

fn check_dim(dim: usize) -> Result<usize> {
    match dim {
        2 | 3 => Ok(dim),
        other => Err(Error::UnsupportedDimension(other)),
    }
}

/// A normalized state vector in ℂ² or ℂ³.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Ket {
    amps: Vec<Complex64>,
}

impl Ket {
    /// Builds a ket from raw amplitudes, validating dimension, finiteness, and
    /// unit norm (within [`AMPLITUDE_TOL`]).
    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        check_dim(amps.len())?;
        for (j, a) in amps.iter().enumerate() {
            if !a.re.is_finite() || !a.im.is_finite() {
                return Err(Error::NonFiniteAmplitude(j));
            }
        }
        let norm_sqr: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        if (norm_sqr - 1.0).abs() > AMPLITUDE_TOL {
            return Err(Error::NotNormalized {
                norm_sqr,
                tol: AMPLITUDE_TOL,
            });
        }
        Ok(Self { amps })
    }

    fn new_unchecked(amps: Vec<Complex64>) -> Self {
        debug_assert!(matches!(amps.len(), 2 | 3));
        Self { amps }
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn amp(&self, j: usize) -> Complex64 {
        self.amps[j]
    }

    /// Inner product ⟨self|other⟩, conjugate-linear in `self`.
    pub fn inner(&self, other: &Ket) -> Complex64 {
        debug_assert_eq!(self.dim(), other.dim());
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }
}

/// A complete orthonormal measurement basis of ℂ² or ℂ³.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrthonormalBasis {
    kets: Vec<Ket>,
}

impl OrthonormalBasis {
    /// Builds a basis from `dim` kets, validating pairwise orthonormality
    /// within [`AMPLITUDE_TOL`].
    pub fn from_kets(kets: Vec<Ket>) -> Result<Self> {
        let dim = check_dim(kets.len())?;
        for k in &kets {
            if k.dim() != dim {
                return Err(Error::DimensionMismatch {
                    left: dim,
                    right: k.dim(),
                });
            }
        }
        for i in 0..dim {
            for j in 0..dim {
                let expected = if i == j { 1.0 } else { 0.0 };
                let deviation = (kets[i].inner(&kets[j]) - expected).norm();
                if deviation > AMPLITUDE_TOL {
                    return Err(Error::NotOrthonormal {
                        i,
                        j,
                        deviation,
                        tol: AMPLITUDE_TOL,
                    });
                }
            }
        }
        Ok(Self { kets })
    }

    fn new_unchecked(kets: Vec<Ket>) -> Self {
        debug_assert!(Self::from_kets(kets.clone()).is_ok());
        Self { kets }
    }

    pub fn dim(&self) -> usize {
        self.kets.len()
    }

    pub fn ket(&self, u: usize) -> &Ket {
        &self.kets[u]
    }

    pub fn kets(&self) -> &[Ket] {
        &self.kets
    }
}

/// A pure state of two qudits, amplitudes indexed row-major by (j, k).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BipartiteState {
    dim: usize,
    amps: Vec<Complex64>,
}

impl BipartiteState {
    /// Builds a state from raw amplitudes (length dim²), validating unit norm.
    pub fn from_amplitudes(dim: usize, amps: Vec<Complex64>) -> Result<Self> {
        check_dim(dim)?;
        if amps.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                left: dim * dim,
                right: amps.len(),
            });
        }
        for (j, a) in amps.iter().enumerate() {
            if !a.re.is_finite() || !a.im.is_finite() {
                return Err(Error::NonFiniteAmplitude(j));
            }
        }
        let norm_sqr: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        if (norm_sqr - 1.0).abs() > AMPLITUDE_TOL {
            return Err(Error::NotNormalized {
                norm_sqr,
                tol: AMPLITUDE_TOL,
            });
        }
        Ok(Self { dim, amps })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn amp(&self, j: usize, k: usize) -> Complex64 {
        self.amps[j * self.dim + k]
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }
}

/// The canonical maximally entangled state (1/√dim) Σⱼ |j⟩⊗|j⟩.
pub fn max_entangled(dim: usize) -> Result<BipartiteState> {
    check_dim(dim)?;
    let coeff = 1.0 / (dim as f64).sqrt();
    let mut amps = vec![Complex64::new(0.0, 0.0); dim * dim];
    for j in 0..dim {
        amps[j * dim + j] = Complex64::new(coeff, 0.0);
    }
    Ok(BipartiteState { dim, amps })
}

/// Joint outcome probabilities p[u][v] for a pair of local measurements.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct JointDistribution {
    dim: usize,
    p: Vec<f64>,
}

impl JointDistribution {
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Probability of Alice outcome `u` and Bob outcome `v`.
    pub fn get(&self, u: usize, v: usize) -> f64 {
        self.p[u * self.dim + v]
    }

    /// Row-major cell view, indexed by u·dim + v.
    pub fn cells(&self) -> &[f64] {
        &self.p
    }

    pub fn total(&self) -> f64 {
        self.p.iter().sum()
    }
}

/// Born-rule joint distribution: p[u][v] = |⟨A_u ⊗ B_v | state⟩|²,
/// with bras conjugate-linear.
pub fn joint_distribution(
    state: &BipartiteState,
    a: &OrthonormalBasis,
    b: &OrthonormalBasis,
) -> Result<JointDistribution> {
    let dim = state.dim();
    if a.dim() != dim {
        return Err(Error::DimensionMismatch {
            left: dim,
            right: a.dim(),
        });
    }
    if b.dim() != dim {
        return Err(Error::DimensionMismatch {
            left: dim,
            right: b.dim(),
        });
    }
    let mut p = Vec::with_capacity(dim * dim);
    for u in 0..dim {
        let au = a.ket(u);
        for v in 0..dim {
            let bv = b.ket(v);
            let mut amp = Complex64::new(0.0, 0.0);
            for j in 0..dim {
                let au_j = au.amp(j).conj();
                for k in 0..dim {
                    amp += au_j * bv.amp(k).conj() * state.amp(j, k);
                }
            }
            p.push(amp.norm_sqr());
        }
    }
    Ok(JointDistribution { dim, p })
}

fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// Alice's dimension-2 basis: standard for x = 0, Hadamard for x = 1.
///
/// # Panics
/// If `x` is not 0 or 1.
pub fn alice_basis_d2(x: u8) -> OrthonormalBasis {
    assert!(x <= 1, "question bit {x} out of domain");
    let kets = if x == 0 {
        vec![
            Ket::new_unchecked(vec![re(1.0), re(0.0)]),
            Ket::new_unchecked(vec![re(0.0), re(1.0)]),
        ]
    } else {
        let s = FRAC_1_SQRT_2;
        vec![
            Ket::new_unchecked(vec![re(s), re(s)]),
            Ket::new_unchecked(vec![re(s), re(-s)]),
        ]
    };
    OrthonormalBasis::new_unchecked(kets)
}

/// Bob's dimension-2 basis {ν₀(θ_y), ν₁(θ_y)} with
/// ν₀ = cos θ_y|0⟩ + sin θ_y|1⟩ and ν₁ = sin θ_y|0⟩ − cos θ_y|1⟩,
/// where θ_y is `theta0` for y = 0 and `theta1` for y = 1.
///
/// # Panics
/// If `y` is not 0 or 1.
pub fn bob_basis_d2(y: u8, theta0: f64, theta1: f64) -> OrthonormalBasis {
    assert!(y <= 1, "question bit {y} out of domain");
    let t = if y == 0 { theta0 } else { theta1 };
    let (s, c) = t.sin_cos();
    OrthonormalBasis::new_unchecked(vec![
        Ket::new_unchecked(vec![re(c), re(s)]),
        Ket::new_unchecked(vec![re(s), re(-c)]),
    ])
}

/// Alice's dimension-3 basis: standard for x = 0, Fourier (ω = e^{2πi/3}) for x = 1.
///
/// # Panics
/// If `x` is not 0 or 1.
pub fn alice_basis_d3(x: u8) -> OrthonormalBasis {
    assert!(x <= 1, "question bit {x} out of domain");
    let kets = if x == 0 {
        vec![
            Ket::new_unchecked(vec![re(1.0), re(0.0), re(0.0)]),
            Ket::new_unchecked(vec![re(0.0), re(1.0), re(0.0)]),
            Ket::new_unchecked(vec![re(0.0), re(0.0), re(1.0)]),
        ]
    } else {
        let s = re(1.0 / 3f64.sqrt());
        let w = Complex64::from_polar(1.0, 2.0 * PI / 3.0);
        let w2 = w * w;
        vec![
            Ket::new_unchecked(vec![s, s, s]),
            Ket::new_unchecked(vec![s, s * w, s * w2]),
            Ket::new_unchecked(vec![s, s * w2, s * w]),
        ]
    };
    OrthonormalBasis::new_unchecked(kets)
}

/// Bob's dimension-3 basis: the ψ triple for y = 0, the φ triple for y = 1.
///
/// With (α, β) = (θ0, θ1) for y = 0 and (θ1, θ0) for y = 1, the kets are
///
/// - |0⟩·cos α + |1⟩·sin α cos β + |2⟩·sin α sin β
/// - |0⟩·sin α − |1⟩·cos α cos β − |2⟩·cos α sin β
/// - |1⟩·sin β − |2⟩·cos β
///
/// The minus sign on the third ket's |2⟩ component is required for the triple
/// to be orthonormal at every angle (the same sign pattern as ν₁ in dimension 2);
/// with a plus sign the Gram matrix deviates from the identity generically.
///
/// # Panics
/// If `y` is not 0 or 1.
pub fn bob_basis_d3(y: u8, theta0: f64, theta1: f64) -> OrthonormalBasis {
    assert!(y <= 1, "question bit {y} out of domain");
    let (alpha, beta) = if y == 0 {
        (theta0, theta1)
    } else {
        (theta1, theta0)
    };
    let (s0, c0) = alpha.sin_cos();
    let (s1, c1) = beta.sin_cos();
    OrthonormalBasis::new_unchecked(vec![
        Ket::new_unchecked(vec![re(c0), re(s0 * c1), re(s0 * s1)]),
        Ket::new_unchecked(vec![re(s0), re(-c0 * c1), re(-c0 * s1)]),
        Ket::new_unchecked(vec![re(0.0), re(s1), re(-c1)]),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    const GRID_STEP: f64 = PI / 32.0;

    #[test]
    fn max_entangled_d2_amplitudes() {
        let state = max_entangled(2).unwrap();
        let inv_sqrt2 = FRAC_1_SQRT_2;
        assert_abs_diff_eq!(state.amp(0, 0).re, inv_sqrt2, epsilon = 1e-15);
        assert_abs_diff_eq!(state.amp(1, 1).re, inv_sqrt2, epsilon = 1e-15);
        assert_eq!(state.amp(0, 1), Complex64::new(0.0, 0.0));
        assert_eq!(state.amp(1, 0), Complex64::new(0.0, 0.0));
        let norm_sqr: f64 = state.amplitudes().iter().map(|a| a.norm_sqr()).sum();
        assert_abs_diff_eq!(norm_sqr, 1.0, epsilon = AMPLITUDE_TOL);
    }

    #[test]
    fn max_entangled_d3_amplitudes() {
        let state = max_entangled(3).unwrap();
        let inv_sqrt3 = 1.0 / 3f64.sqrt();
        for j in 0..3 {
            assert_abs_diff_eq!(state.amp(j, j).re, inv_sqrt3, epsilon = 1e-15);
        }
        assert_eq!(state.amp(0, 2), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn max_entangled_rejects_other_dims() {
        assert!(matches!(
            max_entangled(4),
            Err(Error::UnsupportedDimension(4))
        ));
    }

    #[test]
    fn alice_d2_hadamard_first_ket() {
        let basis = alice_basis_d2(1);
        assert_abs_diff_eq!(basis.ket(0).amp(0).re, FRAC_1_SQRT_2, epsilon = 1e-15);
        assert_abs_diff_eq!(basis.ket(0).amp(1).re, FRAC_1_SQRT_2, epsilon = 1e-15);
    }

    #[test]
    fn bob_d2_at_zero_angle() {
        let basis = bob_basis_d2(0, 0.0, 1.0);
        assert_abs_diff_eq!(basis.ket(0).amp(0).re, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(basis.ket(0).amp(1).re, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(basis.ket(1).amp(0).re, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(basis.ket(1).amp(1).re, -1.0, epsilon = 1e-15);
    }

    #[test]
    fn alice_d3_fourier_second_ket() {
        let basis = alice_basis_d3(1);
        let w = Complex64::from_polar(1.0, 2.0 * PI / 3.0);
        let s = 1.0 / 3f64.sqrt();
        assert_abs_diff_eq!((basis.ket(1).amp(1) - s * w).norm(), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(
            (basis.ket(1).amp(2) - s * w * w).norm(),
            0.0,
            epsilon = 1e-15
        );
    }

    #[test]
    fn bob_d3_at_zero_angles() {
        // All sines vanish: kets reduce to {|0⟩, −|1⟩, −|2⟩}.
        let basis = bob_basis_d3(0, 0.0, 0.0);
        assert_abs_diff_eq!(basis.ket(0).amp(0).re, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(basis.ket(1).amp(1).re, -1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(basis.ket(2).amp(2).re, -1.0, epsilon = 1e-15);
    }

    #[test]
    fn bob_d3_quarter_turn() {
        // θ0 = π/2, θ1 = 0 → first ket |1⟩, second |0⟩, third −|2⟩.
        let basis = bob_basis_d3(0, PI / 2.0, 0.0);
        assert_abs_diff_eq!(basis.ket(0).amp(1).re, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(basis.ket(1).amp(0).re, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(basis.ket(2).amp(2).re, -1.0, epsilon = 1e-12);
    }

    fn assert_orthonormal(basis: &OrthonormalBasis) {
        let dim = basis.dim();
        for i in 0..dim {
            for j in 0..dim {
                let expected = if i == j { 1.0 } else { 0.0 };
                let dev = (basis.ket(i).inner(basis.ket(j)) - expected).norm();
                assert!(dev <= AMPLITUDE_TOL, "deviation {dev} at ({i},{j})");
            }
        }
    }

    #[test]
    fn bases_orthonormal_on_sampled_grid() {
        for x in 0..2u8 {
            assert_orthonormal(&alice_basis_d2(x));
            assert_orthonormal(&alice_basis_d3(x));
        }
        for i0 in (0..64).step_by(7) {
            for i1 in (0..64).step_by(7) {
                let (t0, t1) = (i0 as f64 * GRID_STEP, i1 as f64 * GRID_STEP);
                for y in 0..2u8 {
                    assert_orthonormal(&bob_basis_d2(y, t0, t1));
                    assert_orthonormal(&bob_basis_d3(y, t0, t1));
                }
            }
        }
    }

    #[test]
    fn joint_standard_bases_is_diagonal() {
        let state = max_entangled(2).unwrap();
        let p = joint_distribution(&state, &alice_basis_d2(0), &bob_basis_d2(0, 0.0, 0.0));
        let p = p.unwrap();
        assert_abs_diff_eq!(p.get(0, 0), 0.5, epsilon = AMPLITUDE_TOL);
        assert_abs_diff_eq!(p.get(1, 1), 0.5, epsilon = AMPLITUDE_TOL);
        assert_abs_diff_eq!(p.get(0, 1), 0.0, epsilon = AMPLITUDE_TOL);

        let state3 = max_entangled(3).unwrap();
        let a3 = alice_basis_d3(0);
        let b3 = OrthonormalBasis::from_kets(a3.kets().to_vec()).unwrap();
        let p3 = joint_distribution(&state3, &a3, &b3).unwrap();
        for u in 0..3 {
            for v in 0..3 {
                let expected = if u == v { 1.0 / 3.0 } else { 0.0 };
                assert_abs_diff_eq!(p3.get(u, v), expected, epsilon = AMPLITUDE_TOL);
            }
        }
    }

    #[test]
    fn diagonal_mass_matches_cosine_law() {
        // Alice standard, Bob ν(θ0): p[0][0] + p[1][1] = cos²θ0.
        let state = max_entangled(2).unwrap();
        let theta0 = PI / 8.0;
        let p = joint_distribution(&state, &alice_basis_d2(0), &bob_basis_d2(0, theta0, 0.3));
        let p = p.unwrap();
        assert_abs_diff_eq!(
            p.get(0, 0) + p.get(1, 1),
            theta0.cos().powi(2),
            epsilon = AMPLITUDE_TOL
        );
    }

    #[test]
    fn distributions_normalized_on_sampled_grid() {
        let s2 = max_entangled(2).unwrap();
        let s3 = max_entangled(3).unwrap();
        for i0 in (0..64).step_by(9) {
            for i1 in (0..64).step_by(9) {
                let (t0, t1) = (i0 as f64 * GRID_STEP, i1 as f64 * GRID_STEP);
                for x in 0..2u8 {
                    for y in 0..2u8 {
                        let p2 =
                            joint_distribution(&s2, &alice_basis_d2(x), &bob_basis_d2(y, t0, t1))
                                .unwrap();
                        assert_abs_diff_eq!(p2.total(), 1.0, epsilon = AMPLITUDE_TOL);
                        assert!(p2.cells().iter().all(|&v| v >= -1e-15));
                        let p3 =
                            joint_distribution(&s3, &alice_basis_d3(x), &bob_basis_d3(y, t0, t1))
                                .unwrap();
                        assert_abs_diff_eq!(p3.total(), 1.0, epsilon = AMPLITUDE_TOL);
                        assert!(p3.cells().iter().all(|&v| v >= -1e-15));
                    }
                }
            }
        }
    }

    #[test]
    fn global_phase_invariance() {
        let state = max_entangled(3).unwrap();
        let a = alice_basis_d3(1);
        let b = bob_basis_d3(1, 0.7, 2.1);
        let reference = joint_distribution(&state, &a, &b).unwrap();

        // Multiply one ket of each basis by unit phases and compare.
        let phase = Complex64::from_polar(1.0, 0.937);
        let mut a_kets = a.kets().to_vec();
        a_kets[2] =
            Ket::from_amplitudes(a_kets[2].amplitudes().iter().map(|&z| z * phase).collect())
                .unwrap();
        let a2 = OrthonormalBasis::from_kets(a_kets).unwrap();

        let phase_b = Complex64::from_polar(1.0, -2.4);
        let mut b_kets = b.kets().to_vec();
        b_kets[0] = Ket::from_amplitudes(
            b_kets[0]
                .amplitudes()
                .iter()
                .map(|&z| z * phase_b)
                .collect(),
        )
        .unwrap();
        let b2 = OrthonormalBasis::from_kets(b_kets).unwrap();

        let shifted = joint_distribution(&state, &a2, &b2).unwrap();
        for u in 0..3 {
            for v in 0..3 {
                assert_abs_diff_eq!(
                    reference.get(u, v),
                    shifted.get(u, v),
                    epsilon = AMPLITUDE_TOL
                );
            }
        }
    }

    #[test]
    fn mismatched_dimensions_rejected() {
        let state = max_entangled(2).unwrap();
        let err = joint_distribution(&state, &alice_basis_d3(0), &bob_basis_d2(0, 0.0, 0.0));
        assert!(matches!(err, Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn non_orthonormal_basis_rejected() {
        let k0 = Ket::from_amplitudes(vec![re(1.0), re(0.0)]).unwrap();
        let err = OrthonormalBasis::from_kets(vec![k0.clone(), k0]);
        assert!(matches!(err, Err(Error::NotOrthonormal { .. })));
    }

    #[test]
    fn unnormalized_ket_rejected() {
        let err = Ket::from_amplitudes(vec![re(1.0), re(1.0)]);
        assert!(matches!(err, Err(Error::NotNormalized { .. })));
    }
}
