//! Rotation numbers of the level curves and exact orbit checks.
//!
//! On a level `h < c` the map turns the curve by `c - h` out of a perimeter
//! of `P(h) = 2(a+b) - c - 7h`, so orbits are circle rotations by
//! `rho(h) = (c - h) / P(h)`. Iteration runs in arc coordinates, one exact
//! addition per step.

use std::collections::HashSet;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::delzant::{build_blowup_polygon, ConstructionParams};
use crate::error::{Error, Result};
use crate::exact_arith::QField;
use crate::exec::Exec;
use crate::recurrence_map::LevelCurve;

/// Default number of iterates checked on irrational levels.
pub const DEFAULT_ITERATES: u64 = 10_000;

/// A fibre over a level curve: level `h` and arc position `s` in `[0, P(h))`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LevelCoordinate {
    pub h: QField,
    pub s: QField,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum OrbitKind {
    Periodic { q: u64 },
    IrrationalCertified,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitReport {
    pub h: QField,
    pub rho: QField,
    #[serde(flatten)]
    pub kind: OrbitKind,
    pub distinct_count_checked: u64,
}

fn check_level(params: &ConstructionParams, h: &QField) -> Result<()> {
    QField::common_field([&params.a, h])?;
    let top = &params.c - &params.eps;
    if h.is_negative() || *h >= top {
        return Err(Error::OutOfRange(format!("level {h} is not in [0, c - eps) = [0, {top})")));
    }
    Ok(())
}

/// `2(a+b) - c - 7h`.
pub fn perimeter_formula(params: &ConstructionParams, h: &QField) -> QField {
    QField::from_int(2) * (&params.a + &params.b) - &params.c - QField::from_int(7) * h
}

/// `(c - h) / (2(a+b) - c - 7h)` for `0 <= h < c - eps`.
pub fn rotation_number(params: &ConstructionParams, h: &QField) -> Result<QField> {
    check_level(params, h)?;
    Ok((&params.c - h) / perimeter_formula(params, h))
}

/// Arc positions `s_0 = start, s_{k+1} = s_k + step mod period`.
pub struct ArcOrbit {
    s: QField,
    step: QField,
    period: QField,
}

impl ArcOrbit {
    /// Requires `0 <= start < period` and `0 <= step < period`.
    pub fn new(start: QField, step: QField, period: QField) -> Self {
        ArcOrbit { s: start, step, period }
    }
}

impl Iterator for ArcOrbit {
    type Item = QField;
    fn next(&mut self) -> Option<QField> {
        let mut next = &self.s + &self.step;
        if next >= self.period {
            next = next - &self.period;
        }
        Some(std::mem::replace(&mut self.s, next))
    }
}

/// The level curve of the blow-up polygon at `h`, its perimeter and the arc
/// step `c - h`.
fn setup(params: &ConstructionParams, h: &QField) -> Result<(LevelCurve, QField)> {
    check_level(params, h)?;
    let curve = LevelCurve::new(build_blowup_polygon(params)?.as_polygon(), h)?;
    if *curve.perimeter() != perimeter_formula(params, h) {
        return Err(Error::Verification {
            point: format!("level {h}"),
            detail: format!("level perimeter {} disagrees with the closed form", curve.perimeter()),
        });
    }
    Ok((curve, &params.c - h))
}

/// The first `n` arc positions of the orbit of the arc origin.
pub fn orbit_arcs(params: &ConstructionParams, h: &QField, n: u64) -> Result<Vec<QField>> {
    let (curve, step) = setup(params, h)?;
    Ok(ArcOrbit::new(QField::zero(), step, curve.perimeter().clone()).take(n as usize).collect())
}

/// Decides the orbit type from `rho` and confirms it by iteration: on a
/// rational level `p/q` the first `q` iterates are distinct and the `q`-th
/// returns; on an irrational level the first `n` iterates are distinct.
pub fn classify_level(params: &ConstructionParams, h: &QField, n: u64) -> Result<OrbitReport> {
    let rho = rotation_number(params, h)?;
    let (curve, step) = setup(params, h)?;
    let period = curve.perimeter().clone();
    let fail = |detail: String| Error::Verification { point: format!("level {h}"), detail };
    let (kind, count) = match rho.to_rational() {
        Some(r) => {
            let q = r.denom().to_u64().ok_or_else(|| Error::OutOfRange(format!("period of {rho}")))?;
            let mut orbit = ArcOrbit::new(QField::zero(), step, period);
            let first: Vec<QField> = orbit.by_ref().take(q as usize).collect();
            let distinct: HashSet<&QField> = first.iter().collect();
            if distinct.len() as u64 != q {
                return Err(fail(format!("{} distinct iterates, expected {q}", distinct.len())));
            }
            if orbit.next().as_ref() != Some(&first[0]) {
                return Err(fail(format!("iterate {q} does not return")));
            }
            (OrbitKind::Periodic { q }, q)
        }
        None => {
            let mut seen = HashSet::with_capacity(n as usize);
            for (k, s) in ArcOrbit::new(QField::zero(), step, period).take(n as usize).enumerate() {
                if !seen.insert(s) {
                    return Err(fail(format!("iterate {k} repeats an earlier one")));
                }
            }
            (OrbitKind::IrrationalCertified, n)
        }
    };
    Ok(OrbitReport { h: h.clone(), rho, kind, distinct_count_checked: count })
}

/// Levels classified independently of each other.
pub fn classify_batch(params: &ConstructionParams, levels: &[QField], n: u64, exec: Exec) -> Vec<Result<OrbitReport>> {
    exec.map(levels, |h| classify_level(params, h, n))
}

/// Distinct gap lengths between cyclically consecutive points of `arcs` on
/// a circle of length `period`, in increasing order.
pub fn gap_lengths(arcs: &[QField], period: &QField) -> Vec<QField> {
    let mut sorted = arcs.to_vec();
    sorted.sort();
    sorted.dedup();
    if sorted.len() < 2 {
        return sorted.first().map(|_| vec![period.clone()]).unwrap_or_default();
    }
    let mut gaps: Vec<QField> = sorted.windows(2).map(|w| &w[1] - &w[0]).collect();
    gaps.push(period - &(sorted.last().unwrap() - &sorted[0]));
    gaps.sort();
    gaps.dedup();
    gaps
}

/// Whether the first `n` iterates cut the circle into gaps of at most three
/// distinct lengths.
pub fn three_distance(params: &ConstructionParams, h: &QField, n: u64) -> Result<bool> {
    let (curve, _) = setup(params, h)?;
    let arcs = orbit_arcs(params, h, n)?;
    Ok(gap_lengths(&arcs, curve.perimeter()).len() <= 3)
}

/// `4c < a + b`, which makes the derivative numerator `2(4c - (a + b))` of
/// `rho` negative and `rho` strictly decreasing.
pub fn derivative_sign_ok(params: &ConstructionParams) -> bool {
    QField::from_int(4) * &params.c < &params.a + &params.b
}

/// Checks strict decrease of `rho` on the grid `i (c - eps) / grid_size`,
/// `i = 0..grid_size`, together with [`derivative_sign_ok`].
pub fn rho_monotone_check(params: &ConstructionParams, grid_size: usize) -> Result<bool> {
    if grid_size < 2 {
        return Err(Error::OutOfRange(format!("grid size {grid_size} must be at least 2")));
    }
    let top = &params.c - &params.eps;
    let rhos = (0..grid_size)
        .map(|i| rotation_number(params, &(&top * &QField::from_ratio(i as i64, grid_size as i64))))
        .collect::<Result<Vec<_>>>()?;
    Ok(derivative_sign_ok(params) && rhos.windows(2).all(|w| w[0] > w[1]))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Histogram {
    pub h: QField,
    pub iterates: u64,
    pub counts: Vec<u64>,
    /// Largest over smallest bin count; absent when some bin is empty or
    /// there are no iterates.
    pub max_min_ratio: Option<QField>,
}

/// Bin counts of the first `n` arc positions over `bins` equal arcs, on an
/// irrational level.
pub fn equidistribution_stats(params: &ConstructionParams, h: &QField, n: u64, bins: usize) -> Result<Histogram> {
    if bins == 0 {
        return Err(Error::OutOfRange("bins must be positive".into()));
    }
    if rotation_number(params, h)?.is_rational() {
        return Err(Error::OutOfRange(format!("level {h} is periodic")));
    }
    let (curve, _) = setup(params, h)?;
    let period = curve.perimeter().clone();
    let scale = QField::from(BigInt::from(bins)) / &period;
    let mut counts = vec![0u64; bins];
    for s in orbit_arcs(params, h, n)? {
        let b = (&s * &scale).floor().to_usize().expect("bin index").min(bins - 1);
        counts[b] += 1;
    }
    let (lo, hi) = (*counts.iter().min().unwrap(), *counts.iter().max().unwrap());
    let max_min_ratio = (lo > 0).then(|| QField::from_ratio(hi as i64, lo as i64));
    Ok(Histogram { h: h.clone(), iterates: n, counts, max_min_ratio })
}
