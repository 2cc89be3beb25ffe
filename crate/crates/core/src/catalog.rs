//! Classification artifacts built on top of the grid sweeps: fixed-precision
//! rounding, the three kinds of equivalence classes (grid points, function
//! pairs, and (pair, point) tuples), the maximal strata of both game families,
//! and the three dimension-distinguisher catalogs D1/D2/D3.

use crate::error::{Error, Result};
use crate::funcspace::{enumerate_f2, enumerate_g3, TruthTable2, TruthTable3};
use crate::game::{
    question_distributions, win_from_distributions, win_probability, GameSpec, ScoringTable,
};
use crate::sweep::{
    compute_surface, enumerate_games, find_max, grid_distributions, surface_values, AngleGridPoint,
    SweepResult, TIGHT_TIE_TOL,
};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

/// How real values are mapped to fixed-decimal keys.
///
/// `Truncate` (the default) drops digits beyond the kept decimals; it is the
/// convention under which the published groupings (0.85, 0.80, 0.67, …)
/// reproduce. `HalfAwayFromZero` is conventional rounding.
#[derive(Clone, Copy, Default, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RoundingMode {
    #[default]
    Truncate,
    HalfAwayFromZero,
}

impl fmt::Display for RoundingMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RoundingMode::Truncate => write!(f, "truncate"),
            RoundingMode::HalfAwayFromZero => write!(f, "half-away-from-zero"),
        }
    }
}

/// Scales `value` by 10^decimals and maps it to an integer under `mode`.
pub fn round_scaled(value: f64, decimals: u8, mode: RoundingMode) -> i64 {
    let scaled = value * 10f64.powi(i32::from(decimals));
    match mode {
        RoundingMode::Truncate => scaled.trunc() as i64,
        RoundingMode::HalfAwayFromZero => scaled.round() as i64,
    }
}

/// A probability rendered at fixed decimal precision, e.g. scaled=85 with
/// decimals=2 prints as `0.85`. Serializes as that string.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct RoundedKey {
    pub scaled: i64,
    pub decimals: u8,
}

impl RoundedKey {
    pub fn of(value: f64, decimals: u8, mode: RoundingMode) -> Self {
        Self {
            scaled: round_scaled(value, decimals, mode),
            decimals,
        }
    }

    /// The real value this key denotes (exact for small scales).
    pub fn value(&self) -> f64 {
        self.scaled as f64 / 10f64.powi(i32::from(self.decimals))
    }
}

impl fmt::Display for RoundedKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.decimals == 0 {
            return write!(f, "{}", self.scaled);
        }
        let base = 10u64.pow(u32::from(self.decimals));
        let sign = if self.scaled < 0 { "-" } else { "" };
        let abs = self.scaled.unsigned_abs();
        write!(
            f,
            "{sign}{}.{:0width$}",
            abs / base,
            abs % base,
            width = usize::from(self.decimals)
        )
    }
}

impl FromStr for RoundedKey {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        let malformed = || Error::ParseTruthTable(format!("rounded key `{s}`"));
        let (sign, digits) = match t.strip_prefix('-') {
            Some(rest) => (-1i64, rest),
            None => (1i64, t),
        };
        let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
        if int_part.is_empty() && frac_part.is_empty() {
            return Err(malformed());
        }
        let all_digits = |p: &str| p.chars().all(|c| c.is_ascii_digit());
        if !all_digits(int_part) || !all_digits(frac_part) || frac_part.len() > 18 {
            return Err(malformed());
        }
        let int: i64 = if int_part.is_empty() {
            0
        } else {
            int_part.parse().map_err(|_| malformed())?
        };
        let frac: i64 = if frac_part.is_empty() {
            0
        } else {
            frac_part.parse().map_err(|_| malformed())?
        };
        let decimals = frac_part.len() as u8;
        Ok(Self {
            scaled: sign * (int * 10i64.pow(u32::from(decimals)) + frac),
            decimals,
        })
    }
}

impl Serialize for RoundedKey {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        ser.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for RoundedKey {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(de)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Members sharing one rounded winning probability. The generic parameter is
/// the domain: grid points, games, or (game, point) tuples.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EquivalenceClass<M> {
    pub key: RoundedKey,
    pub members: Vec<M>,
}

/// Groups `(member, value)` pairs by rounded value; classes are returned with
/// keys descending, members in input order.
fn group_classes<M>(
    items: impl Iterator<Item = (M, f64)>,
    decimals: u8,
    mode: RoundingMode,
) -> Vec<EquivalenceClass<M>> {
    let mut map: BTreeMap<i64, Vec<M>> = BTreeMap::new();
    for (member, value) in items {
        map.entry(round_scaled(value, decimals, mode))
            .or_default()
            .push(member);
    }
    map.into_iter()
        .rev()
        .map(|(scaled, members)| EquivalenceClass {
            key: RoundedKey { scaled, decimals },
            members,
        })
        .collect()
}

/// Classes of the 4096 grid points of one game's surface (kind 1).
pub fn basis_classes(
    spec: &GameSpec,
    decimals: u8,
    mode: RoundingMode,
) -> Vec<EquivalenceClass<AngleGridPoint>> {
    let surface = compute_surface(spec);
    group_classes(
        AngleGridPoint::all().map(|p| (p, surface.value_at(p))),
        decimals,
        mode,
    )
}

/// Classes of all games of one dimension evaluated at a fixed grid point
/// (kind 2).
pub fn pair_classes(
    dim: usize,
    point: AngleGridPoint,
    decimals: u8,
    mode: RoundingMode,
) -> Result<Vec<EquivalenceClass<GameSpec>>> {
    let games = enumerate_games(dim)?;
    let dists = question_distributions(dim, point.theta0(), point.theta1());
    Ok(group_classes(
        games
            .into_iter()
            .map(|g| (g, win_from_distributions(g.f(), g.g(), &dists))),
        decimals,
        mode,
    ))
}

/// Domain selector for [`CatalogBuilder::tuple_classes`].
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TupleDomain {
    /// Every (game, grid point) tuple of the dimension.
    Full,
    /// Only games whose sweep maximum lies in the top rounded stratum.
    MaxStratum,
}

/// Which catalog a distinguisher record belongs to.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub enum CatalogTag {
    D1,
    D2,
    D3,
}

impl fmt::Display for CatalogTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CatalogTag::D1 => write!(f, "D1"),
            CatalogTag::D2 => write!(f, "D2"),
            CatalogTag::D3 => write!(f, "D3"),
        }
    }
}

/// One distinguisher: a function triple, the grid point at which both games
/// are compared, both winning probabilities there, and their gap.
///
/// `p_d2` and `p_d3` are recomputable by evaluating the two games at
/// `eval_point`; `eval_point` is the canonical (lexicographically smallest)
/// argmax of the winning game, `winner_ties` is that game's full tie set, and
/// `other_min`/`other_max` bound the losing game's value over the tie set.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DistinguisherRecord {
    pub f: TruthTable2,
    pub g3: TruthTable3,
    /// Restriction of `g3` to binary inputs.
    pub g2p: TruthTable2,
    pub class_tag: CatalogTag,
    /// Dimension whose game attains the larger maximum (2 or 3).
    pub winner_dim: usize,
    pub eval_point: AngleGridPoint,
    pub p_d2: f64,
    pub p_d3: f64,
    /// |p_d2 − p_d3| at `eval_point`.
    pub gap: f64,
    pub winner_ties: Vec<AngleGridPoint>,
    pub other_min: f64,
    pub other_max: f64,
}

/// Sweep-backed builder for strata, tuple classes, and the D1/D2/D3 catalogs.
pub struct CatalogBuilder {
    sweep2: Vec<SweepResult>,
    sweep3: Vec<SweepResult>,
}

impl CatalogBuilder {
    /// Runs both full sweeps (196 and 7140 games over the 64×64 grid).
    pub fn new() -> Result<Self> {
        Ok(Self {
            sweep2: crate::sweep::sweep_all(2)?,
            sweep3: crate::sweep::sweep_all(3)?,
        })
    }

    /// Wraps precomputed sweeps (must be complete and in enumeration order).
    pub fn from_sweeps(sweep2: Vec<SweepResult>, sweep3: Vec<SweepResult>) -> Result<Self> {
        if sweep2.len() != 14 * 14 {
            return Err(Error::DimensionMismatch {
                left: sweep2.len(),
                right: 14 * 14,
            });
        }
        if sweep3.len() != 14 * 510 {
            return Err(Error::DimensionMismatch {
                left: sweep3.len(),
                right: 14 * 510,
            });
        }
        Ok(Self { sweep2, sweep3 })
    }

    pub fn sweep2(&self) -> &[SweepResult] {
        &self.sweep2
    }

    pub fn sweep3(&self) -> &[SweepResult] {
        &self.sweep3
    }

    pub(crate) fn sweep2_entry(&self, f: TruthTable2, g: TruthTable2) -> &SweepResult {
        let idx = (usize::from(f.encoding()) - 1) * 14 + (usize::from(g.encoding()) - 1);
        &self.sweep2[idx]
    }

    pub(crate) fn sweep3_entry(&self, f: TruthTable2, g: TruthTable3) -> &SweepResult {
        let idx = (usize::from(f.encoding()) - 1) * 510 + (usize::from(g.encoding()) - 1);
        &self.sweep3[idx]
    }

    fn sweep_of(&self, dim: usize) -> Result<&[SweepResult]> {
        match dim {
            2 => Ok(&self.sweep2),
            3 => Ok(&self.sweep3),
            _ => Err(Error::UnsupportedDimension(dim)),
        }
    }

    /// Largest rounded sweep maximum of the dimension.
    fn top_key(&self, dim: usize, decimals: u8, mode: RoundingMode) -> Result<i64> {
        Ok(self
            .sweep_of(dim)?
            .iter()
            .map(|r| round_scaled(r.max_value, decimals, mode))
            .max()
            .expect("sweeps are non-empty"))
    }

    /// Games whose sweep maximum rounds to the dimension's top key.
    pub fn max_stratum(
        &self,
        dim: usize,
        decimals: u8,
        mode: RoundingMode,
    ) -> Result<Vec<SweepResult>> {
        let top = self.top_key(dim, decimals, mode)?;
        Ok(self
            .sweep_of(dim)?
            .iter()
            .filter(|r| round_scaled(r.max_value, decimals, mode) == top)
            .cloned()
            .collect())
    }

    /// Classes of all 196 dimension-2 games by rounded sweep maximum.
    pub fn table1(&self, decimals: u8, mode: RoundingMode) -> Vec<EquivalenceClass<GameSpec>> {
        group_classes(
            self.sweep2.iter().map(|r| (r.spec, r.max_value)),
            decimals,
            mode,
        )
    }

    /// The dimension-3 games attaining the global maximum at the given
    /// rounding, with their full sweep results.
    pub fn game2_max(&self, decimals: u8, mode: RoundingMode) -> Vec<SweepResult> {
        self.max_stratum(3, decimals, mode)
            .expect("dimension 3 is supported")
    }

    /// Classes of (game, grid point) tuples by rounded value (kind 3).
    /// `TupleDomain::MaxStratum` restricts to games in the top stratum,
    /// which keeps the dimension-3 domain tractable.
    pub fn tuple_classes(
        &self,
        dim: usize,
        decimals: u8,
        mode: RoundingMode,
        domain: TupleDomain,
    ) -> Result<Vec<EquivalenceClass<(GameSpec, AngleGridPoint)>>> {
        let dists = grid_distributions(dim)?;
        let games: Vec<GameSpec> = match domain {
            TupleDomain::Full => enumerate_games(dim)?,
            TupleDomain::MaxStratum => self
                .max_stratum(dim, decimals, mode)?
                .into_iter()
                .map(|r| r.spec)
                .collect(),
        };
        let mut map: BTreeMap<i64, Vec<(GameSpec, AngleGridPoint)>> = BTreeMap::new();
        for spec in games {
            let values = surface_values(spec.f(), spec.g(), &dists);
            for point in AngleGridPoint::all() {
                map.entry(round_scaled(values[point.flat()], decimals, mode))
                    .or_default()
                    .push((spec, point));
            }
        }
        Ok(map
            .into_iter()
            .rev()
            .map(|(scaled, members)| EquivalenceClass {
                key: RoundedKey { scaled, decimals },
                members,
            })
            .collect())
    }

    /// Sweep result of the dimension-2 game (f, g2p), where `g2p` may be
    /// constant (computed on demand; constant tables are outside the sweep).
    fn restriction_result(
        &self,
        f: TruthTable2,
        g2p: TruthTable2,
        cache: &mut HashMap<(u8, u8), SweepResult>,
    ) -> SweepResult {
        if !g2p.is_constant() {
            return self.sweep2_entry(f, g2p).clone();
        }
        cache
            .entry((f.encoding(), g2p.encoding()))
            .or_insert_with(|| {
                let spec = GameSpec::dim2(f, g2p).expect("f is non-constant");
                find_max(&compute_surface(&spec), TIGHT_TIE_TOL)
            })
            .clone()
    }

    fn make_record(
        &self,
        f: TruthTable2,
        g3: TruthTable3,
        tag: CatalogTag,
        winner_dim: usize,
        winner: &SweepResult,
    ) -> DistinguisherRecord {
        let g2p = g3.restrict();
        let d2spec = GameSpec::dim2(f, g2p).expect("f is non-constant");
        let d3spec = GameSpec::dim3(f, g3).expect("catalog tables are non-constant");
        let eval = winner.canonical_argmax;
        let p_d2 = win_probability(&d2spec, eval.theta0(), eval.theta1()).value();
        let p_d3 = win_probability(&d3spec, eval.theta0(), eval.theta1()).value();
        let other = if winner_dim == 2 { &d3spec } else { &d2spec };
        let mut other_min = f64::INFINITY;
        let mut other_max = f64::NEG_INFINITY;
        for p in &winner.argmax {
            let v = win_probability(other, p.theta0(), p.theta1()).value();
            other_min = other_min.min(v);
            other_max = other_max.max(v);
        }
        DistinguisherRecord {
            f,
            g3,
            g2p,
            class_tag: tag,
            winner_dim,
            eval_point: eval,
            p_d2,
            p_d3,
            gap: (p_d2 - p_d3).abs(),
            winner_ties: winner.argmax.clone(),
            other_min,
            other_max,
        }
    }

    /// D1: triples whose restriction game sits in the dimension-2 top
    /// stratum, compared at the restriction's canonical argmax. Triples that
    /// belong to the dimension-3 top stratum are claimed by D2 instead, which
    /// keeps the catalogs disjoint.
    pub fn build_d1(&self, decimals: u8, mode: RoundingMode) -> Vec<DistinguisherRecord> {
        let top2 = self.top_key(2, decimals, mode).expect("dim 2 supported");
        let top3 = self.top_key(3, decimals, mode).expect("dim 3 supported");
        let mut records = Vec::new();
        for f in enumerate_f2() {
            for g3 in enumerate_g3() {
                let g2p = g3.restrict();
                if g2p.is_constant() {
                    continue;
                }
                let m2 = self.sweep2_entry(f, g2p);
                if round_scaled(m2.max_value, decimals, mode) != top2 {
                    continue;
                }
                let m3 = self.sweep3_entry(f, g3);
                if round_scaled(m3.max_value, decimals, mode) == top3 {
                    continue;
                }
                records.push(self.make_record(f, g3, CatalogTag::D1, 2, m2));
            }
        }
        sort_records(&mut records);
        records
    }

    /// D2: triples in the dimension-3 top stratum, compared at the
    /// dimension-3 canonical argmax.
    pub fn build_d2(&self, decimals: u8, mode: RoundingMode) -> Vec<DistinguisherRecord> {
        let mut records: Vec<DistinguisherRecord> = self
            .game2_max(decimals, mode)
            .iter()
            .map(|m3| {
                let f = m3.spec.f();
                let g3 = match m3.spec.g() {
                    ScoringTable::Dim3(g) => g,
                    ScoringTable::Dim2(_) => unreachable!("dimension-3 sweep"),
                };
                self.make_record(f, g3, CatalogTag::D2, 3, m3)
            })
            .collect();
        sort_records(&mut records);
        records
    }

    /// D3: triples where neither game reaches its dimension's top stratum.
    /// The game with the larger sweep maximum wins; both games are compared
    /// at the winner's canonical argmax and the record is kept when the gap
    /// exceeds `threshold`. Constant restrictions participate (their flat
    /// surfaces are computed on demand).
    pub fn build_d3(
        &self,
        threshold: f64,
        decimals: u8,
        mode: RoundingMode,
    ) -> Result<Vec<DistinguisherRecord>> {
        if !(0.0..=1.0).contains(&threshold) {
            return Err(Error::InvalidThreshold(threshold));
        }
        let top2 = self.top_key(2, decimals, mode)?;
        let top3 = self.top_key(3, decimals, mode)?;
        let mut flat_cache: HashMap<(u8, u8), SweepResult> = HashMap::new();
        let mut records = Vec::new();
        for f in enumerate_f2() {
            for g3 in enumerate_g3() {
                let m3 = self.sweep3_entry(f, g3);
                if round_scaled(m3.max_value, decimals, mode) == top3 {
                    continue;
                }
                let g2p = g3.restrict();
                let m2 = self.restriction_result(f, g2p, &mut flat_cache);
                if round_scaled(m2.max_value, decimals, mode) == top2 {
                    continue;
                }
                let (winner_dim, winner) = if m2.max_value >= m3.max_value {
                    (2, &m2)
                } else {
                    (3, m3)
                };
                let eval = winner.canonical_argmax;
                let d2spec = GameSpec::dim2(f, g2p).expect("f is non-constant");
                let d3spec = GameSpec::dim3(f, g3).expect("non-constant");
                let p_d2 = win_probability(&d2spec, eval.theta0(), eval.theta1()).value();
                let p_d3 = win_probability(&d3spec, eval.theta0(), eval.theta1()).value();
                if (p_d2 - p_d3).abs() > threshold {
                    records.push(self.make_record(f, g3, CatalogTag::D3, winner_dim, winner));
                }
            }
        }
        sort_records(&mut records);
        Ok(records)
    }
}

/// Gap descending, then (f, g3) encodings ascending.
fn sort_records(records: &mut [DistinguisherRecord]) {
    records.sort_by(|a, b| {
        b.gap
            .partial_cmp(&a.gap)
            .expect("gaps are finite")
            .then_with(|| (a.f.encoding(), a.g3.encoding()).cmp(&(b.f.encoding(), b.g3.encoding())))
    });
}

/// Renders a catalog as CSV: function triple in bracket notation, the
/// evaluation point (indices and exact angles), and the probabilities at the
/// requested precision. The `gap` column is the difference of the two
/// rendered probabilities, matching how published difference columns are
/// computed from printed values.
pub fn distinguishers_to_csv(
    records: &[DistinguisherRecord],
    decimals: u8,
    mode: RoundingMode,
) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record([
        "tag",
        "f",
        "g2p",
        "g3",
        "winner_dim",
        "i0",
        "i1",
        "theta0",
        "theta1",
        "p_d2",
        "p_d3",
        "gap",
    ])
    .expect("in-memory write");
    for r in records {
        let k2 = RoundedKey::of(r.p_d2, decimals, mode);
        let k3 = RoundedKey::of(r.p_d3, decimals, mode);
        let kgap = RoundedKey {
            scaled: (k2.scaled - k3.scaled).abs(),
            decimals,
        };
        let (a0, a1) = r.eval_point.angle_strings();
        w.write_record([
            r.class_tag.to_string(),
            r.f.to_string(),
            r.g2p.to_string(),
            r.g3.to_string(),
            r.winner_dim.to_string(),
            r.eval_point.i0().to_string(),
            r.eval_point.i1().to_string(),
            a0,
            a1,
            k2.to_string(),
            k3.to_string(),
            kgap.to_string(),
        ])
        .expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("CSV is UTF-8")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::test_support::builder;

    fn t2(bits: [u8; 4]) -> TruthTable2 {
        TruthTable2::new(bits).unwrap()
    }

    fn t3(bits: [u8; 9]) -> TruthTable3 {
        TruthTable3::new(bits).unwrap()
    }

    fn point(i0: u8, i1: u8) -> AngleGridPoint {
        AngleGridPoint::new(i0, i1).unwrap()
    }

    #[test]
    fn rounding_modes_differ_on_boundaries() {
        assert_eq!(round_scaled(0.8628, 2, RoundingMode::Truncate), 86);
        assert_eq!(round_scaled(0.8628, 2, RoundingMode::HalfAwayFromZero), 86);
        assert_eq!(round_scaled(0.679, 2, RoundingMode::Truncate), 67);
        assert_eq!(round_scaled(0.679, 2, RoundingMode::HalfAwayFromZero), 68);
        assert_eq!(round_scaled(0.675, 2, RoundingMode::HalfAwayFromZero), 68);
        assert_eq!(round_scaled(-0.675, 2, RoundingMode::HalfAwayFromZero), -68);
        assert_eq!(round_scaled(-0.679, 2, RoundingMode::Truncate), -67);
        assert_eq!(round_scaled(0.5, 1, RoundingMode::Truncate), 5);
    }

    #[test]
    fn rounded_key_display_and_parse() {
        let k = RoundedKey {
            scaled: 85,
            decimals: 2,
        };
        assert_eq!(k.to_string(), "0.85");
        assert_eq!("0.85".parse::<RoundedKey>().unwrap(), k);
        let k = RoundedKey {
            scaled: 5,
            decimals: 1,
        };
        assert_eq!(k.to_string(), "0.5");
        assert!((k.value() - 0.5).abs() < 1e-15);
        let k = RoundedKey {
            scaled: -68,
            decimals: 2,
        };
        assert_eq!(k.to_string(), "-0.68");
        assert_eq!("-0.68".parse::<RoundedKey>().unwrap(), k);
        let k = RoundedKey {
            scaled: 3,
            decimals: 0,
        };
        assert_eq!(k.to_string(), "3");
        assert_eq!(serde_json::to_string(&k).unwrap(), "\"3\"");
        assert!("abc".parse::<RoundedKey>().is_err());
    }

    #[test]
    fn table1_truncated_groups() {
        let classes = builder().table1(2, RoundingMode::Truncate);
        let summary: Vec<(i64, usize)> = classes
            .iter()
            .map(|c| (c.key.scaled, c.members.len()))
            .collect();
        assert_eq!(
            summary,
            vec![(85, 28), (80, 32), (67, 48), (55, 32), (50, 56)]
        );
        // The top class is exactly the games with g ∈ {XOR, XNOR}.
        let top = &classes[0];
        assert!(top.members.iter().all(|spec| {
            matches!(spec.g(), ScoringTable::Dim2(g) if g == TruthTable2::XOR || g == TruthTable2::XNOR)
        }));
        // f with one 1 against g with one 0 lands at 0.55.
        let spec = GameSpec::dim2(t2([0, 0, 0, 1]), t2([0, 1, 1, 1])).unwrap();
        let class55 = classes.iter().find(|c| c.key.scaled == 55).unwrap();
        assert!(class55.members.contains(&spec));
        // Partition is exhaustive and members round to their key.
        assert_eq!(classes.iter().map(|c| c.members.len()).sum::<usize>(), 196);
        for class in &classes {
            for member in &class.members {
                let r = builder().sweep2_entry(
                    member.f(),
                    match member.g() {
                        ScoringTable::Dim2(g) => g,
                        _ => unreachable!(),
                    },
                );
                assert_eq!(
                    round_scaled(r.max_value, 2, RoundingMode::Truncate),
                    class.key.scaled
                );
            }
        }
    }

    fn table2_pairs() -> Vec<(TruthTable2, TruthTable3)> {
        vec![
            (t2([0, 1, 0, 0]), t3([0, 1, 0, 1, 0, 0, 0, 0, 1])),
            (t2([0, 1, 0, 0]), t3([1, 0, 0, 0, 0, 1, 0, 1, 0])),
            (t2([0, 1, 1, 1]), t3([0, 1, 1, 1, 1, 0, 1, 0, 1])),
            (t2([0, 1, 1, 1]), t3([1, 0, 1, 0, 1, 1, 1, 1, 0])),
            (t2([1, 0, 0, 0]), t3([0, 1, 0, 1, 0, 0, 0, 0, 1])),
            (t2([1, 0, 0, 0]), t3([1, 0, 0, 0, 0, 1, 0, 1, 0])),
            (t2([1, 0, 1, 1]), t3([0, 1, 1, 1, 1, 0, 1, 0, 1])),
            (t2([1, 0, 1, 1]), t3([1, 0, 1, 0, 1, 1, 1, 1, 0])),
        ]
    }

    #[test]
    fn dim3_max_stratum_is_the_eight_known_games() {
        let stratum = builder().game2_max(2, RoundingMode::Truncate);
        assert_eq!(stratum.len(), 8);
        for r in &stratum {
            assert!((r.max_value - 0.8628319378035946).abs() < 1e-12);
        }
        let got: Vec<(TruthTable2, TruthTable3)> = stratum
            .iter()
            .map(|r| {
                (
                    r.spec.f(),
                    match r.spec.g() {
                        ScoringTable::Dim3(g) => g,
                        _ => unreachable!(),
                    },
                )
            })
            .collect();
        let mut expect = table2_pairs();
        let mut got_sorted = got.clone();
        expect.sort_by_key(|(f, g)| (f.encoding(), g.encoding()));
        got_sorted.sort_by_key(|(f, g)| (f.encoding(), g.encoding()));
        assert_eq!(got_sorted, expect);
    }

    #[test]
    fn basis_class_counts_and_top_members() {
        let chsh = GameSpec::dim2(TruthTable2::AND, TruthTable2::XOR).unwrap();
        assert_eq!(basis_classes(&chsh, 1, RoundingMode::Truncate).len(), 8);
        // At 3 decimals the top class isolates the four optimal points.
        let classes = basis_classes(&chsh, 3, RoundingMode::Truncate);
        assert_eq!(
            classes[0].members,
            vec![point(4, 28), point(4, 60), point(36, 28), point(36, 60)]
        );
        // At 2 decimals the 0.85 class is larger (20 points).
        let classes = basis_classes(&chsh, 2, RoundingMode::Truncate);
        assert_eq!(classes[0].key.scaled, 85);
        assert_eq!(classes[0].members.len(), 20);

        let emb = GameSpec::dim3(TruthTable2::AND, TruthTable3::EMBEDDED_XOR).unwrap();
        assert_eq!(basis_classes(&emb, 1, RoundingMode::Truncate).len(), 7);
        let classes = basis_classes(&emb, 2, RoundingMode::Truncate);
        let class76 = classes.iter().find(|c| c.key.scaled == 76).unwrap();
        assert_eq!(
            class76.members,
            vec![point(33, 1), point(33, 2), point(34, 1), point(34, 2)]
        );
        // Classes cover the grid exactly once.
        assert_eq!(classes.iter().map(|c| c.members.len()).sum::<usize>(), 4096);
    }

    #[test]
    fn pair_classes_at_the_optimal_point() {
        let classes = pair_classes(2, point(4, 60), 2, RoundingMode::Truncate).unwrap();
        let summary: Vec<(i64, usize)> = classes
            .iter()
            .map(|c| (c.key.scaled, c.members.len()))
            .collect();
        assert_eq!(
            summary,
            vec![
                (85, 2),
                (80, 4),
                (67, 6),
                (62, 24),
                (58, 24),
                (55, 4),
                (50, 62),
                (49, 6),
                (44, 4),
                (41, 24),
                (37, 24),
                (32, 6),
                (19, 4),
                (14, 2)
            ]
        );
        let class = |scaled: i64| classes.iter().find(|c| c.key.scaled == scaled).unwrap();
        let in_class = |scaled: i64, f: [u8; 4], g: [u8; 4]| {
            class(scaled)
                .members
                .contains(&GameSpec::dim2(t2(f), t2(g)).unwrap())
        };
        assert!(in_class(50, [0, 0, 0, 1], [0, 1, 0, 1]));
        assert!(in_class(50, [0, 0, 1, 0], [0, 1, 0, 1]));
        assert!(in_class(85, [0, 0, 0, 1], [0, 1, 1, 0]));
        // Complement games always share a class.
        for c in &classes {
            for spec in &c.members {
                let conj = GameSpec::dim2(
                    spec.f().complement(),
                    match spec.g() {
                        ScoringTable::Dim2(g) => g.complement(),
                        _ => unreachable!(),
                    },
                )
                .unwrap();
                assert!(c.members.contains(&conj));
            }
        }
    }

    #[test]
    fn tuple_classes_top_strata() {
        let classes = builder()
            .tuple_classes(2, 2, RoundingMode::Truncate, TupleDomain::Full)
            .unwrap();
        assert_eq!(
            classes.iter().map(|c| c.members.len()).sum::<usize>(),
            196 * 4096
        );
        assert_eq!(classes[0].key.scaled, 85);
        assert_eq!(classes[0].members.len(), 560);
        let keys: Vec<i64> = classes.iter().map(|c| c.key.scaled).collect();
        let mut sorted = keys.clone();
        sorted.sort_by(|a, b| b.cmp(a));
        assert_eq!(keys, sorted);

        let classes = builder()
            .tuple_classes(3, 2, RoundingMode::Truncate, TupleDomain::MaxStratum)
            .unwrap();
        assert_eq!(classes[0].key.scaled, 86);
        for r in builder().game2_max(2, RoundingMode::Truncate) {
            assert!(classes[0].members.contains(&(r.spec, r.canonical_argmax)));
        }
    }

    #[test]
    fn d1_catalog_shape() {
        let d1 = builder().build_d1(2, RoundingMode::Truncate);
        assert_eq!(d1.len(), 892);
        assert!(d1.iter().all(|r| r.class_tag == CatalogTag::D1
            && r.winner_dim == 2
            && (r.g2p == TruthTable2::XOR || r.g2p == TruthTable2::XNOR)
            && r.g2p == r.g3.restrict()
            && (r.gap - (r.p_d2 - r.p_d3).abs()).abs() < 1e-15));
        // Sorted by gap descending.
        assert!(d1.windows(2).all(|w| w[0].gap >= w[1].gap));
        // Known row: (f=[0,0,0,1], g3=[0,1,0,1,0,0,0,1,1]).
        let row = d1
            .iter()
            .find(|r| r.f == t2([0, 0, 0, 1]) && r.g3 == t3([0, 1, 0, 1, 0, 0, 0, 1, 1]))
            .expect("row present");
        assert!((row.p_d2 - (2.0 + 2.0f64.sqrt()) / 4.0).abs() < 1e-9);
        assert!(row.other_min <= row.p_d3 + 1e-15 && row.p_d3 <= row.other_max + 1e-15);
        assert_eq!(row.eval_point, point(4, 28));
    }

    #[test]
    fn d2_catalog_shape() {
        let d2 = builder().build_d2(2, RoundingMode::Truncate);
        assert_eq!(d2.len(), 8);
        for r in &d2 {
            assert_eq!(r.class_tag, CatalogTag::D2);
            assert_eq!(r.winner_dim, 3);
            assert_eq!(round_scaled(r.p_d3, 2, RoundingMode::Truncate), 86);
        }
        let got: Vec<(TruthTable2, TruthTable3)> = d2.iter().map(|r| (r.f, r.g3)).collect();
        for pair in table2_pairs() {
            assert!(got.contains(&pair));
        }
        // Disjoint from D1 at the (f, g3) level.
        let d1 = builder().build_d1(2, RoundingMode::Truncate);
        for r in &d2 {
            assert!(!d1.iter().any(|q| q.f == r.f && q.g3 == r.g3));
        }
    }

    #[test]
    fn d3_catalog_at_default_threshold() {
        let d3 = builder().build_d3(0.44, 2, RoundingMode::Truncate).unwrap();
        assert_eq!(d3.len(), 4);
        let got: Vec<(TruthTable2, TruthTable3)> = d3.iter().map(|r| (r.f, r.g3)).collect();
        let expect = [
            (t2([0, 0, 0, 1]), t3([0, 1, 1, 1, 1, 0, 0, 0, 0])),
            (t2([0, 0, 1, 0]), t3([0, 1, 1, 1, 1, 0, 0, 0, 0])),
            (t2([1, 1, 0, 1]), t3([1, 0, 0, 0, 0, 1, 1, 1, 1])),
            (t2([1, 1, 1, 0]), t3([1, 0, 0, 0, 0, 1, 1, 1, 1])),
        ];
        for pair in expect {
            assert!(got.contains(&pair), "missing {pair:?}");
        }
        for r in &d3 {
            assert!(r.gap > 0.44);
            assert!((r.gap - 0.4677).abs() < 5e-4);
        }
        assert!(builder()
            .build_d3(1.0, 2, RoundingMode::Truncate)
            .unwrap()
            .is_empty());
        assert!(matches!(
            builder().build_d3(1.5, 2, RoundingMode::Truncate),
            Err(Error::InvalidThreshold(_))
        ));
    }

    #[test]
    fn csv_rendering_quotes_and_rounds() {
        let d2 = builder().build_d2(2, RoundingMode::Truncate);
        let csv = distinguishers_to_csv(&d2[..1], 2, RoundingMode::Truncate);
        let mut lines = csv.lines();
        assert_eq!(
            lines.next().unwrap(),
            "tag,f,g2p,g3,winner_dim,i0,i1,theta0,theta1,p_d2,p_d3,gap"
        );
        let row = lines.next().unwrap();
        assert!(row.starts_with("D2,\"["));
        assert!(row.contains("0.86"));
    }
}
