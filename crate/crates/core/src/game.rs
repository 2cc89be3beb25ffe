//! Game specifications and winning-probability evaluation.
//!
//! A game is a pair (f, g): the referee draws questions (x, y) ∈ {0,1}²
//! uniformly, the players measure a shared maximally entangled state and
//! answer (a, b), and they win iff g(a, b) = f(x, y). Alice's measurement
//! basis depends only on x; Bob's depends on y through two angle parameters
//! (θ₀, θ₁).

use crate::error::{Error, Result};
use crate::funcspace::{TruthTable2, TruthTable3};
use crate::tensor::{
    alice_basis_d2, alice_basis_d3, bob_basis_d2, bob_basis_d3, joint_distribution, max_entangled,
    JointDistribution,
};
use serde::{Deserialize, Serialize};
use std::fmt;

/// The answer-scoring function g, dimensioned by the answer alphabet.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ScoringTable {
    Dim2(TruthTable2),
    Dim3(TruthTable3),
}

impl ScoringTable {
    pub fn dim(&self) -> usize {
        match self {
            ScoringTable::Dim2(_) => 2,
            ScoringTable::Dim3(_) => 3,
        }
    }

    /// Table lookup g(a, b).
    ///
    /// # Panics
    /// If `a` or `b` is outside the answer alphabet.
    pub fn eval(&self, a: u8, b: u8) -> u8 {
        match self {
            ScoringTable::Dim2(t) => t.eval(a, b),
            ScoringTable::Dim3(t) => t.eval(a, b),
        }
    }

    pub fn is_constant(&self) -> bool {
        match self {
            ScoringTable::Dim2(t) => t.is_constant(),
            ScoringTable::Dim3(t) => t.is_constant(),
        }
    }

    /// Row-major bit cells, length `dim²`.
    fn cells(&self) -> &[u8] {
        match self {
            ScoringTable::Dim2(t) => t.as_slice(),
            ScoringTable::Dim3(t) => t.as_slice(),
        }
    }
}

impl fmt::Display for ScoringTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScoringTable::Dim2(t) => t.fmt(f),
            ScoringTable::Dim3(t) => t.fmt(f),
        }
    }
}

impl fmt::Debug for ScoringTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScoringTable::Dim2(t) => t.fmt(f),
            ScoringTable::Dim3(t) => t.fmt(f),
        }
    }
}

#[derive(Deserialize)]
struct RawGameSpec {
    f: TruthTable2,
    g: ScoringTable,
}

/// A validated game: a non-constant question predicate `f` together with an
/// answer-scoring table `g` of the appropriate dimension.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawGameSpec")]
pub struct GameSpec {
    f: TruthTable2,
    g: ScoringTable,
}

impl GameSpec {
    /// Two-dimensional game. `f` must be non-constant; `g` may be constant
    /// (constant scoring tables arise as restrictions of three-outcome ones).
    pub fn dim2(f: TruthTable2, g: TruthTable2) -> Result<Self> {
        if f.is_constant() {
            return Err(Error::ConstantTable);
        }
        Ok(Self {
            f,
            g: ScoringTable::Dim2(g),
        })
    }

    /// Three-dimensional game. Both tables must be non-constant.
    pub fn dim3(f: TruthTable2, g: TruthTable3) -> Result<Self> {
        if f.is_constant() || g.is_constant() {
            return Err(Error::ConstantTable);
        }
        Ok(Self {
            f,
            g: ScoringTable::Dim3(g),
        })
    }

    pub fn dim(&self) -> usize {
        self.g.dim()
    }

    pub fn f(&self) -> TruthTable2 {
        self.f
    }

    pub fn g(&self) -> ScoringTable {
        self.g
    }
}

impl TryFrom<RawGameSpec> for GameSpec {
    type Error = Error;
    fn try_from(raw: RawGameSpec) -> Result<Self> {
        match raw.g {
            ScoringTable::Dim2(g) => GameSpec::dim2(raw.f, g),
            ScoringTable::Dim3(g) => GameSpec::dim3(raw.f, g),
        }
    }
}

impl fmt::Debug for GameSpec {
    fn fmt(&self, fmtr: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(fmtr, "GameSpec(f={}, g={})", self.f, self.g)
    }
}

impl fmt::Display for GameSpec {
    fn fmt(&self, fmtr: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(fmtr, "(f={}, g={})", self.f, self.g)
    }
}

/// A winning probability in [0, 1].
#[derive(Clone, Copy, PartialEq, PartialOrd, Debug, Serialize, Deserialize)]
#[serde(transparent)]
pub struct WinProbability(pub(crate) f64);

impl WinProbability {
    pub fn value(self) -> f64 {
        self.0
    }
}

impl fmt::Display for WinProbability {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// The four answer distributions conditioned on the question pair, indexed
/// by `2x + y`.
pub(crate) fn question_distributions(
    dim: usize,
    theta0: f64,
    theta1: f64,
) -> [JointDistribution; 4] {
    let state = max_entangled(dim).expect("game dimensions are 2 or 3");
    let (alice, bob): ([_; 2], [_; 2]) = match dim {
        2 => (
            [alice_basis_d2(0), alice_basis_d2(1)],
            [
                bob_basis_d2(0, theta0, theta1),
                bob_basis_d2(1, theta0, theta1),
            ],
        ),
        3 => (
            [alice_basis_d3(0), alice_basis_d3(1)],
            [
                bob_basis_d3(0, theta0, theta1),
                bob_basis_d3(1, theta0, theta1),
            ],
        ),
        _ => unreachable!("max_entangled already rejected dim {dim}"),
    };
    [
        joint_distribution(&state, &alice[0], &bob[0]).expect("validated construction"),
        joint_distribution(&state, &alice[0], &bob[1]).expect("validated construction"),
        joint_distribution(&state, &alice[1], &bob[0]).expect("validated construction"),
        joint_distribution(&state, &alice[1], &bob[1]).expect("validated construction"),
    ]
}

/// Probability mass that `g` scores 0 / 1 under `dist`, accumulated in
/// row-major cell order (fixed order keeps results bit-identical across
/// call sites and thread counts).
fn score_masses(gbits: &[u8], dist: &JointDistribution) -> (f64, f64) {
    let mut mass = [0.0f64; 2];
    for (p, &bit) in dist.cells().iter().zip(gbits) {
        mass[bit as usize] += p;
    }
    (mass[0], mass[1])
}

/// Winning probability given precomputed question distributions.
pub(crate) fn win_from_distributions(
    f: TruthTable2,
    g: ScoringTable,
    dists: &[JointDistribution; 4],
) -> f64 {
    let gbits = g.cells();
    let cond = |x: u8, y: u8| -> f64 {
        let (m0, m1) = score_masses(gbits, &dists[(2 * x + y) as usize]);
        if f.eval(x, y) == 1 {
            m1
        } else {
            m0
        }
    };
    let c00 = cond(0, 0);
    let c01 = cond(0, 1);
    let c10 = cond(1, 0);
    let c11 = cond(1, 1);
    0.25 * (((c00 + c01) + c10) + c11)
}

/// Winning probability of `spec` with Bob's measurement angles (θ₀, θ₁),
/// averaged over the uniform question distribution.
pub fn win_probability(spec: &GameSpec, theta0: f64, theta1: f64) -> WinProbability {
    let dists = question_distributions(spec.dim(), theta0, theta1);
    WinProbability(win_from_distributions(spec.f(), spec.g(), &dists))
}

/// Winning probability conditioned on the question pair (x, y).
pub fn conditional_win(spec: &GameSpec, x: u8, y: u8, theta0: f64, theta1: f64) -> Result<f64> {
    for (index, value) in [(0, x), (1, y)] {
        if value > 1 {
            return Err(Error::InvalidBit { index, value });
        }
    }
    let dists = question_distributions(spec.dim(), theta0, theta1);
    let (m0, m1) = score_masses(spec.g().cells(), &dists[(2 * x + y) as usize]);
    Ok(if spec.f().eval(x, y) == 1 { m1 } else { m0 })
}

/// Closed-form winning probability of the game (AND, XOR) in dimension 2:
/// ¼·[cos²θ₀ + cos²θ₁ + ½(1 + sin 2θ₀) + ½(1 − sin 2θ₁)].
pub fn chsh_closed_form(theta0: f64, theta1: f64) -> f64 {
    0.25 * (theta0.cos().powi(2)
        + theta1.cos().powi(2)
        + 0.5 * (1.0 + (2.0 * theta0).sin())
        + 0.5 * (1.0 - (2.0 * theta1).sin()))
}
