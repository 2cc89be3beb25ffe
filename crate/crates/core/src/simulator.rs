//! Monte Carlo simulation of the dimension-distinguishing protocol: sample
//! questions uniformly, sample answers from the Born-rule joint distribution
//! of the true (hidden) dimension, score each round, and decide the dimension
//! from the empirical statistic S.

use crate::error::{Error, Result};
use crate::funcspace::{TruthTable2, TruthTable3};
use crate::game::{question_distributions, win_probability, GameSpec};
use crate::tensor::JointDistribution;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Expected statistics closer than this cannot be told apart by the decision
/// rule and are rejected as degenerate.
pub const DEGENERATE_TOL: f64 = 1e-6;

/// Full description of one protocol run. The two scoring tables describe the
/// two hypotheses: `g2` scores answers when the hidden state is 2-dimensional,
/// `g3` when it is 3-dimensional; `true_dim` selects which apparatus actually
/// generates the data.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProtocolConfig {
    pub true_dim: usize,
    pub rounds: u64,
    pub theta0: f64,
    pub theta1: f64,
    pub f: TruthTable2,
    pub g2: TruthTable2,
    pub g3: TruthTable3,
    pub rng_seed: u64,
    /// Keep the per-round log in the result.
    pub record_rounds: bool,
}

impl ProtocolConfig {
    /// Defaults reproduce the published protocol: θ = (π/8, 15π/8),
    /// f = AND, XOR scoring in dimension 2, embedded-XOR scoring in
    /// dimension 3.
    pub fn new(true_dim: usize, rounds: u64, rng_seed: u64) -> Result<Self> {
        if true_dim != 2 && true_dim != 3 {
            return Err(Error::UnsupportedDimension(true_dim));
        }
        if rounds == 0 {
            return Err(Error::InvalidRounds);
        }
        Ok(Self {
            true_dim,
            rounds,
            theta0: PI / 8.0,
            theta1: 15.0 * PI / 8.0,
            f: TruthTable2::AND,
            g2: TruthTable2::XOR,
            g3: TruthTable3::EMBEDDED_XOR,
            rng_seed,
            record_rounds: false,
        })
    }
}

/// One protocol round: questions, answers, and the pass/fail score.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoundRecord {
    pub x: u8,
    pub y: u8,
    pub a: u8,
    pub b: u8,
    /// 1 iff the round's scoring table agreed with f(x, y).
    pub score: u8,
}

/// Outcome of a protocol run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProtocolResult {
    /// Fraction of winning rounds (exact ratio of integers).
    pub s: f64,
    pub rounds: u64,
    pub decided_dim: usize,
    /// Analytic S under the 2-dimensional hypothesis at the configured point.
    pub expected_s_d2: f64,
    /// Analytic S under the 3-dimensional hypothesis at the configured point.
    pub expected_s_d3: f64,
    pub log: Option<Vec<RoundRecord>>,
}

/// Samples a cell of `dist` by inverse CDF over the row-major cells.
fn sample_outcome(dist: &JointDistribution, u: f64) -> (u8, u8) {
    let dim = dist.dim();
    let mut cum = 0.0;
    for (idx, &p) in dist.cells().iter().enumerate() {
        cum += p;
        if u < cum {
            return ((idx / dim) as u8, (idx % dim) as u8);
        }
    }
    // Cumulative masses can fall a rounding error short of 1.
    (dim as u8 - 1, dim as u8 - 1)
}

/// Runs the protocol: per round draw x, then y (each uniform over {0,1}),
/// then one uniform variate that picks the answer pair from the Born-rule
/// distribution of the true dimension; score with the true dimension's
/// table; S is the mean score. Deterministic given `rng_seed`.
pub fn run_protocol(config: &ProtocolConfig) -> Result<ProtocolResult> {
    if config.rounds == 0 {
        return Err(Error::InvalidRounds);
    }
    let d2spec = GameSpec::dim2(config.f, config.g2)?;
    let d3spec = GameSpec::dim3(config.f, config.g3)?;
    let true_spec = match config.true_dim {
        2 => &d2spec,
        3 => &d3spec,
        d => return Err(Error::UnsupportedDimension(d)),
    };
    let dists = question_distributions(config.true_dim, config.theta0, config.theta1);

    let mut rng = ChaCha8Rng::seed_from_u64(config.rng_seed);
    let mut wins: u64 = 0;
    let mut log = config
        .record_rounds
        .then(|| Vec::with_capacity(config.rounds as usize));
    for _ in 0..config.rounds {
        let x = u8::from(rng.gen::<f64>() >= 0.5);
        let y = u8::from(rng.gen::<f64>() >= 0.5);
        let (a, b) = sample_outcome(&dists[usize::from(2 * x + y)], rng.gen::<f64>());
        let score = u8::from(true_spec.g().eval(a, b) == config.f.eval(x, y));
        wins += u64::from(score);
        if let Some(log) = log.as_mut() {
            log.push(RoundRecord { x, y, a, b, score });
        }
    }
    let s = wins as f64 / config.rounds as f64;

    let expected_s_d2 = win_probability(&d2spec, config.theta0, config.theta1).value();
    let expected_s_d3 = win_probability(&d3spec, config.theta0, config.theta1).value();
    let decided_dim = decide_dimension(s, expected_s_d2, expected_s_d3)?;
    Ok(ProtocolResult {
        s,
        rounds: config.rounds,
        decided_dim,
        expected_s_d2,
        expected_s_d3,
        log,
    })
}

/// Picks the dimension whose expected statistic is nearest to `s`
/// (ties go to 2). The expectations must differ by at least
/// [`DEGENERATE_TOL`].
pub fn decide_dimension(s: f64, expected_d2: f64, expected_d3: f64) -> Result<usize> {
    if (expected_d2 - expected_d3).abs() < DEGENERATE_TOL {
        return Err(Error::DegenerateConfiguration {
            expected_d2,
            expected_d3,
        });
    }
    if (s - expected_d2).abs() <= (s - expected_d3).abs() {
        Ok(2)
    } else {
        Ok(3)
    }
}

/// Smallest round count n with 2·exp(−n·gap²/2) ≤ `error_prob`
/// (Hoeffding bound for a decision threshold at the midpoint between the two
/// expected statistics, i.e. deviation gap/2 on either side).
pub fn required_rounds(gap: f64, error_prob: f64) -> Result<u64> {
    if !(gap > 0.0 && gap <= 1.0) {
        return Err(Error::InvalidGap(gap));
    }
    if !(error_prob > 0.0 && error_prob < 1.0) {
        return Err(Error::InvalidErrorProb(error_prob));
    }
    let bound = |n: u64| 2.0 * (-(n as f64) * gap * gap / 2.0).exp();
    let mut n = (2.0 * (2.0 / error_prob).ln() / (gap * gap)).ceil() as u64;
    n = n.max(1);
    // Guard against floating-point edge effects in the closed form.
    while bound(n) > error_prob {
        n += 1;
    }
    while n > 1 && bound(n - 1) <= error_prob {
        n -= 1;
    }
    Ok(n)
}
