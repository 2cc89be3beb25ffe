//! Exhaustive evaluation of winning probabilities over the 64×64 grid of
//! measurement-angle pairs (θ₀, θ₁) = (i₀·π/32, i₁·π/32).

use crate::error::{Error, Result};
use crate::funcspace::{enumerate_f2, enumerate_g3};
use crate::game::{question_distributions, win_from_distributions, GameSpec, ScoringTable};
use crate::tensor::JointDistribution;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::fmt;
use std::fmt::Write as _;

/// Number of grid values per angle axis.
pub const GRID_SIZE: usize = 64;
/// Angular spacing between adjacent grid values.
pub const GRID_STEP: f64 = PI / 32.0;
/// Tolerance under which two grid values count as tied for the maximum.
pub const TIGHT_TIE_TOL: f64 = 1e-9;

/// Half a unit in the last reported decimal place: the tolerance under which
/// two values printed with `decimals` digits may coincide.
pub fn presentation_tol(decimals: u8) -> f64 {
    0.5 * 10f64.powi(-i32::from(decimals))
}

#[derive(Deserialize)]
struct RawGridPoint {
    i0: u8,
    i1: u8,
}

/// A point of the angle grid, ordered lexicographically by (i₀, i₁).
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawGridPoint")]
pub struct AngleGridPoint {
    i0: u8,
    i1: u8,
}

impl AngleGridPoint {
    pub fn new(i0: u8, i1: u8) -> Result<Self> {
        for i in [i0, i1] {
            if usize::from(i) >= GRID_SIZE {
                return Err(Error::GridIndexOutOfRange(usize::from(i)));
            }
        }
        Ok(Self { i0, i1 })
    }

    pub fn i0(&self) -> u8 {
        self.i0
    }

    pub fn i1(&self) -> u8 {
        self.i1
    }

    pub fn theta0(&self) -> f64 {
        f64::from(self.i0) * GRID_STEP
    }

    pub fn theta1(&self) -> f64 {
        f64::from(self.i1) * GRID_STEP
    }

    /// Row-major position in a flattened 64×64 surface.
    pub fn flat(&self) -> usize {
        usize::from(self.i0) * GRID_SIZE + usize::from(self.i1)
    }

    /// All 4096 grid points in row-major (lexicographic) order.
    pub fn all() -> impl Iterator<Item = AngleGridPoint> {
        (0..GRID_SIZE as u8)
            .flat_map(|i0| (0..GRID_SIZE as u8).map(move |i1| AngleGridPoint { i0, i1 }))
    }

    /// Angles as exact fraction-of-π strings, e.g. `("pi/8", "15pi/8")`.
    pub fn angle_strings(&self) -> (String, String) {
        (format_grid_angle(self.i0), format_grid_angle(self.i1))
    }
}

impl TryFrom<RawGridPoint> for AngleGridPoint {
    type Error = Error;
    fn try_from(raw: RawGridPoint) -> Result<Self> {
        Self::new(raw.i0, raw.i1)
    }
}

impl fmt::Display for AngleGridPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.i0, self.i1)
    }
}

impl fmt::Debug for AngleGridPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.i0, self.i1)
    }
}

/// Renders grid index `i` as the reduced fraction of π it denotes:
/// 0 → `"0"`, 4 → `"pi/8"`, 32 → `"pi"`, 60 → `"15pi/8"`.
pub fn format_grid_angle(i: u8) -> String {
    if i == 0 {
        return "0".to_string();
    }
    let g = gcd(u32::from(i), 32);
    let num = u32::from(i) / g;
    let den = 32 / g;
    match (num, den) {
        (1, 1) => "pi".to_string(),
        (n, 1) => format!("{n}pi"),
        (1, d) => format!("pi/{d}"),
        (n, d) => format!("{n}pi/{d}"),
    }
}

/// Parses the notation produced by [`format_grid_angle`] (numerator and
/// denominator need not be reduced) back to a grid index.
pub fn parse_grid_angle(s: &str) -> Result<u8> {
    let t = s.trim();
    if t == "0" {
        return Ok(0);
    }
    let malformed = || Error::ParseAngle(s.to_string());
    let (num_str, rest) = t.split_once("pi").ok_or_else(malformed)?;
    let den_str = match rest {
        "" => "1",
        _ => rest.strip_prefix('/').ok_or_else(malformed)?,
    };
    let num: u32 = match num_str {
        "" => 1,
        _ => num_str.parse().map_err(|_| malformed())?,
    };
    let den: u32 = den_str.parse().map_err(|_| malformed())?;
    if den == 0 || (num * 32) % den != 0 {
        return Err(malformed());
    }
    let index = num * 32 / den;
    if index >= GRID_SIZE as u32 {
        return Err(Error::GridIndexOutOfRange(index as usize));
    }
    Ok(index as u8)
}

fn gcd(mut a: u32, mut b: u32) -> u32 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Winning probabilities of one game over the whole angle grid,
/// stored row-major by (i₀, i₁).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WinProbSurface {
    spec: GameSpec,
    values: Vec<f64>,
}

impl WinProbSurface {
    pub fn spec(&self) -> &GameSpec {
        &self.spec
    }

    /// Row-major values; index with [`AngleGridPoint::flat`].
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn value_at(&self, point: AngleGridPoint) -> f64 {
        self.values[point.flat()]
    }

    pub fn min_value(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max_value(&self) -> f64 {
        self.values
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// 64 lines of 64 comma-separated full-precision values; line = i₀,
    /// column = i₁. No header.
    pub fn to_csv_string(&self) -> String {
        let mut out = String::new();
        for i0 in 0..GRID_SIZE {
            for i1 in 0..GRID_SIZE {
                if i1 > 0 {
                    out.push(',');
                }
                write!(out, "{:?}", self.values[i0 * GRID_SIZE + i1]).expect("string write");
            }
            out.push('\n');
        }
        out
    }
}

/// Maximum of one game's surface together with every grid point attaining it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub spec: GameSpec,
    /// Largest value on the surface.
    pub max_value: f64,
    /// All points within the tie tolerance of the maximum, row-major order.
    pub argmax: Vec<AngleGridPoint>,
    /// First (lexicographically smallest) element of `argmax`.
    pub canonical_argmax: AngleGridPoint,
}

/// Answer distributions for every grid point, row-major; entry `[k]` holds
/// the four question-conditioned distributions for grid point `k`.
pub(crate) fn grid_distributions(dim: usize) -> Result<Vec<[JointDistribution; 4]>> {
    if dim != 2 && dim != 3 {
        return Err(Error::UnsupportedDimension(dim));
    }
    Ok(AngleGridPoint::all()
        .map(|p| question_distributions(dim, p.theta0(), p.theta1()))
        .collect())
}

/// Surface values for one game from precomputed grid distributions.
pub(crate) fn surface_values(
    f: crate::funcspace::TruthTable2,
    g: ScoringTable,
    dists: &[[JointDistribution; 4]],
) -> Vec<f64> {
    dists
        .iter()
        .map(|d| win_from_distributions(f, g, d))
        .collect()
}

/// Evaluates `spec` at every grid point.
pub fn compute_surface(spec: &GameSpec) -> WinProbSurface {
    let dists = grid_distributions(spec.dim()).expect("GameSpec dimension is 2 or 3");
    WinProbSurface {
        spec: *spec,
        values: surface_values(spec.f(), spec.g(), &dists),
    }
}

/// Finds the surface maximum and all points within `tie_tol` of it.
/// Use [`TIGHT_TIE_TOL`] to recover exact-arithmetic ties.
pub fn find_max(surface: &WinProbSurface, tie_tol: f64) -> SweepResult {
    assert!(
        tie_tol >= 0.0 && tie_tol.is_finite(),
        "tie tolerance must be finite and non-negative"
    );
    let max_value = surface.max_value();
    let argmax: Vec<AngleGridPoint> = AngleGridPoint::all()
        .filter(|p| max_value - surface.value_at(*p) <= tie_tol)
        .collect();
    let canonical_argmax = argmax[0];
    SweepResult {
        spec: surface.spec,
        max_value,
        argmax,
        canonical_argmax,
    }
}

/// Every game of dimension `dim` in enumeration order: `f` ranges over the 14
/// non-constant two-bit tables (outer), `g` over the non-constant scoring
/// tables of the dimension (inner).
pub fn enumerate_games(dim: usize) -> Result<Vec<GameSpec>> {
    let fs = enumerate_f2();
    match dim {
        2 => Ok(fs
            .iter()
            .flat_map(|&f| {
                enumerate_f2()
                    .into_iter()
                    .map(move |g| GameSpec::dim2(f, g).expect("non-constant tables"))
            })
            .collect()),
        3 => Ok(fs
            .iter()
            .flat_map(|&f| {
                enumerate_g3()
                    .into_iter()
                    .map(move |g| GameSpec::dim3(f, g).expect("non-constant tables"))
            })
            .collect()),
        _ => Err(Error::UnsupportedDimension(dim)),
    }
}

/// Sweeps every game of dimension `dim` over the grid and reports each
/// maximum with its exact-tie set ([`TIGHT_TIE_TOL`]).
///
/// Results are in enumeration order and bit-identical regardless of how many
/// threads evaluate them: each game's surface is computed from the same
/// shared grid distributions in the same per-game order, and parallelism
/// only distributes whole games.
pub fn sweep_all(dim: usize) -> Result<Vec<SweepResult>> {
    let dists = grid_distributions(dim)?;
    let games = enumerate_games(dim)?;
    Ok(games
        .par_iter()
        .map(|spec| {
            let surface = WinProbSurface {
                spec: *spec,
                values: surface_values(spec.f(), spec.g(), &dists),
            };
            find_max(&surface, TIGHT_TIE_TOL)
        })
        .collect())
}
