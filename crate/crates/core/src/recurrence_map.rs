//! The base-level model of the symplectomorphism: four strip shears whose
//! composite turns every low level curve of the boundary distance by `c - h`
//! and fixes every high one.
//!
//! Round `k` is produced by an explicit diagram move. The polygon is chopped
//! at one corner of the rectangle, a node is traded into the chop vertex
//! whose eigenline runs along a strip line at distance `c` from the boundary,
//! slid along that line from one strip corner to the next, and its cut is
//! swung clockwise to the opposite ray. The swept half-plane is sheared by
//! the monodromy and the chopped corner moves to the next corner clockwise
//! (lower right, lower left, upper left, upper right). After four rounds the
//! polygon and the node position are back where they started.

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::affine_plane::{affine_length, on_segment, HalfPlane, LatticeVector, PiecewiseMap, Point, UnimodularAffineMap};
use crate::atf_base::{build_pi0, strip_corners, BaseDiagram, LevelBand, Move, Sweep, SLID_NODE};
use crate::delzant::{build_blowup_polygon, rectangle, ConstructionParams, DelzantPolygon, RationalPolygon};
use crate::error::{Error, Result};
use crate::exact_arith::QField;

/// A unipotent affine map applied on a closed half-plane and fixing its
/// boundary line pointwise.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StripShear {
    pub region: HalfPlane,
    pub map: UnimodularAffineMap,
}

impl StripShear {
    pub fn new(region: HalfPlane, map: UnimodularAffineMap) -> Result<Self> {
        let s = StripShear { region, map };
        let (p, q) = s.boundary_points();
        if s.map.apply(&p) != p || s.map.apply(&q) != q || s.map.trace() != 2 || s.map.det() != 1 {
            return Err(Error::Verification {
                point: p.to_string(),
                detail: "shear does not fix the boundary of its region".into(),
            });
        }
        Ok(s)
    }

    /// Two distinct points on the boundary line.
    fn boundary_points(&self) -> (Point, Point) {
        let n = self.region.normal;
        let nn = QField::from_int(n.u * n.u + n.v * n.v);
        let t = -&self.region.offset / nn;
        let foot = Point::new(&t * &QField::from_int(n.u), &t * &QField::from_int(n.v));
        let other = foot.offset(n.rot90(), &QField::one());
        (foot, other)
    }

    pub fn apply(&self, p: &Point) -> Point {
        if self.region.contains(p) {
            self.map.apply(p)
        } else {
            p.clone()
        }
    }

    pub fn as_piecewise(&self) -> PiecewiseMap {
        PiecewiseMap::single(self.region.clone(), self.map.clone())
    }
}

/// A level curve of the boundary distance with its counterclockwise arc
/// parametrization. The arc origin is the vertex with the smallest `x1`,
/// then smallest `x2`.
#[derive(Clone, Debug)]
pub struct LevelCurve {
    pub h: QField,
    pub polygon: RationalPolygon,
    cumulative: Vec<QField>,
    perimeter: QField,
}

impl LevelCurve {
    pub fn new(poly: &RationalPolygon, h: &QField) -> Result<Self> {
        let level = poly.level_set(h)?;
        let start = (0..level.len())
            .min_by(|&i, &j| {
                let (p, q) = (level.vertex(i), level.vertex(j));
                (&p.x1, &p.x2).cmp(&(&q.x1, &q.x2))
            })
            .expect("nonempty level");
        let mut v = level.vertices().to_vec();
        v.rotate_left(start);
        let polygon = RationalPolygon::new(v)?;
        let mut cumulative = Vec::with_capacity(polygon.len());
        let mut acc = QField::zero();
        for len in polygon.edge_lengths() {
            cumulative.push(acc.clone());
            acc = acc + len;
        }
        Ok(LevelCurve { h: h.clone(), polygon, cumulative, perimeter: acc })
    }

    pub fn perimeter(&self) -> &QField {
        &self.perimeter
    }

    pub fn basepoint(&self) -> &Point {
        self.polygon.vertex(0)
    }

    /// Arc position where edge `i` starts.
    pub fn edge_start(&self, i: usize) -> &QField {
        &self.cumulative[i]
    }

    /// `s mod P` in `[0, P)`.
    pub fn reduce(&self, s: &QField) -> QField {
        let k = (s / &self.perimeter).floor();
        s - &(&QField::from(k) * &self.perimeter)
    }

    /// Arc coordinate of a point on the curve.
    pub fn arc_of(&self, p: &Point) -> Result<QField> {
        let n = self.polygon.len();
        for i in 0..n {
            let (a, b) = (self.polygon.vertex(i), self.polygon.vertex(i + 1));
            if on_segment(a, b, p) {
                let s = &self.cumulative[i] + &affine_length(a, p)?;
                return Ok(self.reduce(&s));
            }
        }
        Err(Error::NotOnLevel(self.h.to_string()))
    }

    /// Point at arc coordinate `s`, any real `s` (taken mod the perimeter).
    pub fn point_at(&self, s: &QField) -> Point {
        let s = self.reduce(s);
        let i = self.cumulative.partition_point(|c| c <= &s) - 1;
        let v = self.polygon.vertex(i);
        v.offset(self.polygon.edge_direction(i), &(&s - &self.cumulative[i]))
    }

    /// Moves `p` by arc distance `t` counterclockwise.
    pub fn rotate(&self, p: &Point, t: &QField) -> Result<Point> {
        Ok(self.point_at(&(self.arc_of(p)? + t)))
    }

    /// The vertices plus `per_edge - 1` evenly spaced interior points of
    /// every edge, in arc order.
    pub fn sample_points(&self, per_edge: i64) -> Vec<Point> {
        let mut out = Vec::new();
        for i in 0..self.polygon.len() {
            let len = self.polygon.edge_length(i);
            for j in 0..per_edge {
                let s = &self.cumulative[i] + &(len * &QField::from_ratio(j, per_edge));
                out.push(self.point_at(&s));
            }
        }
        out
    }
}

/// The point at arc distance `t` counterclockwise from `p` along the level
/// curve of the boundary distance through `p`, which must sit at level `h`.
pub fn rotate_on_level(poly: &RationalPolygon, h: &QField, t: &QField, p: &Point) -> Result<Point> {
    if poly.signed_distance(p) != *h {
        return Err(Error::NotOnLevel(h.to_string()));
    }
    LevelCurve::new(poly, h)?.rotate(p, t)
}

/// One round: the diagram before the transfer, the move performed and the
/// resulting strip shear.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Round {
    pub before: BaseDiagram,
    pub after: BaseDiagram,
    pub shear: StripShear,
}

#[derive(Clone, Debug)]
pub struct RecurrenceMap {
    pub params: ConstructionParams,
    pub polygon: DelzantPolygon,
    pub rounds: Vec<Round>,
    pub source_diagram: BaseDiagram,
    pub target_diagram: BaseDiagram,
    composite: PiecewiseMap,
}

/// Rectangle corners in the order lower left, lower right, upper right,
/// upper left; rounds visit lower right, lower left, upper left, upper right.
const ROUND_CORNERS: [usize; 4] = [1, 0, 3, 2];

fn verification(p: &Point, detail: impl Into<String>) -> Error {
    Error::Verification { point: p.to_string(), detail: detail.into() }
}

fn same_cycle(a: &RationalPolygon, b: &RationalPolygon) -> bool {
    a.len() == b.len() && (0..a.len()).any(|k| (0..a.len()).all(|i| a.vertex(i + k) == b.vertex(i)))
}

/// The lower strip shear written out directly:
/// `(x1, x2) -> (x1 + (c - b/2 - x2), x2)` on `x2 <= c - b/2`.
pub fn bottom_strip_shear(params: &ConstructionParams) -> StripShear {
    let y = &params.c - &params.half_b();
    let region = HalfPlane::new(LatticeVector::new(0, -1), y.clone());
    let map = UnimodularAffineMap::new(1, -1, 0, 1, y, QField::zero()).expect("unimodular");
    StripShear::new(region, map).expect("fixes its boundary line")
}

fn build_round(params: &ConstructionParams, k: usize) -> Result<Round> {
    let corners = strip_corners(params);
    let rect = rectangle(&params.a, &params.b)?;
    let eps_half = &params.eps / &QField::from_int(2);
    let poly = rect.corner_chop(ROUND_CORNERS[k], &params.c)?;
    let next_poly = rect.corner_chop(ROUND_CORNERS[(k + 1) % 4], &params.c)?;
    let (from, to) = (&corners[k], &corners[(k + 1) % 4]);

    // the chop vertex after the corner carries the eigenline along the strip
    let d = BaseDiagram::toric(poly).nodal_trade(ROUND_CORNERS[k] + 1, &eps_half)?;
    let d = d.nodal_slide(0, from)?.nodal_slide(0, to)?;
    match d.provenance.last() {
        Some(Move::Slide { band, .. }) if *band == (LevelBand { lo: params.c.clone(), hi: params.c.clone() }) => {}
        other => return Err(verification(to, format!("round {} slide band is {other:?}", k + 1))),
    }
    let cut = d.opposite_cut(0, Sweep::Clockwise)?;
    let (after, map) = d.cut_transfer(0, &cut, Sweep::Clockwise)?;
    if !same_cycle(&after.polygon, &next_poly) {
        return Err(verification(to, format!("round {} does not land on the next chopped polygon", k + 1)));
    }
    let (region, m) = map.stages.into_iter().next().expect("one stage");
    Ok(Round { before: d, after, shear: StripShear::new(region, m)? })
}

/// Sample levels `i (c - eps) / 10`, `i = 0..10`, used by the internal check.
pub fn rotation_grid(params: &ConstructionParams, count: i64) -> Vec<QField> {
    let top = &params.c - &params.eps;
    (0..count).map(|i| &top * &QField::from_ratio(i, count)).collect()
}

/// Levels strictly between `c + eps` and the maximum `b/2`.
pub fn fixed_grid(params: &ConstructionParams, count: i64) -> Vec<QField> {
    let lo = &params.c + &params.eps;
    let span = &params.half_b() - &lo;
    (1..=count).map(|i| &lo + &(&span * &QField::from_ratio(i, count + 1))).collect()
}

impl RecurrenceMap {
    pub fn for_params(params: &ConstructionParams) -> Result<Self> {
        build_recurrence_map(&build_pi0(params)?, params)
    }

    /// The four rounds composed, as a piecewise map on the plane.
    pub fn composite(&self) -> &PiecewiseMap {
        &self.composite
    }

    pub fn apply_composite(&self, p: &Point) -> Point {
        self.composite.apply(p)
    }

    pub fn round_shear(&self, k: usize) -> &StripShear {
        &self.rounds[k].shear
    }

    /// Arc advance on level `h`: `c - h` below the band, zero above it and
    /// `(c - h) * clamp((c + eps - h) / (2 eps), 0, 1)` in general.
    pub fn advance(&self, h: &QField) -> QField {
        let p = &self.params;
        let u = (&(&p.c + &p.eps) - h) / (&p.eps * &QField::from_int(2));
        let ramp = u.max(QField::zero()).min(QField::one());
        (&p.c - h) * ramp
    }

    pub fn level_curve(&self, h: &QField) -> Result<LevelCurve> {
        LevelCurve::new(&self.polygon, h)
    }

    pub fn apply_phi(&self, p: &Point) -> Result<Point> {
        self.apply_phi_iter(p, 1)
    }

    /// `n`-fold iterate, computed on the arc coordinate of `p`'s level.
    pub fn apply_phi_iter(&self, p: &Point, n: u64) -> Result<Point> {
        let h = self.polygon.distance_to_boundary(p)?;
        if n == 0 {
            return Ok(p.clone());
        }
        let r = self.advance(&h);
        if r.is_zero() {
            return Ok(p.clone());
        }
        let curve = self.level_curve(&h)?;
        let s = curve.arc_of(p)? + &r * &QField::from(BigInt::from(n));
        Ok(curve.point_at(&s))
    }

    /// Checks the composite against level rotation on sample levels and the
    /// identity above the band, and the first round against the explicit
    /// lower strip shear.
    pub fn verify(&self) -> Result<()> {
        let p = &self.params;
        let bottom = bottom_strip_shear(p);
        if self.rounds[0].shear != bottom {
            return Err(verification(&Point::origin(), "round 1 differs from the lower strip shear"));
        }
        for h in rotation_grid(p, 10) {
            let curve = self.level_curve(&h)?;
            let t = &p.c - &h;
            for x in curve.sample_points(4) {
                let want = curve.rotate(&x, &t)?;
                let got = self.apply_composite(&x);
                if got != want {
                    return Err(verification(&x, format!("level {h}: composite gives {got}, rotation gives {want}")));
                }
            }
        }
        for h in fixed_grid(p, 3) {
            for x in self.level_curve(&h)?.sample_points(4) {
                let got = self.apply_composite(&x);
                if got != x {
                    return Err(verification(&x, format!("level {h}: composite moves the point to {got}")));
                }
            }
        }
        Ok(())
    }
}

/// Builds the four rounds starting from `pi0` and checks the result.
pub fn build_recurrence_map(pi0: &BaseDiagram, params: &ConstructionParams) -> Result<RecurrenceMap> {
    let polygon = build_blowup_polygon(params)?;
    if pi0.polygon != polygon {
        return Err(Error::InvalidParams("diagram polygon does not match the parameters".into()));
    }
    let corners = strip_corners(params);
    let slid = pi0.nodes.get(SLID_NODE).ok_or_else(|| Error::InvalidParams("diagram has no slid node".into()))?;
    if slid.position != corners[0] {
        return Err(Error::InvalidParams("slid node is not at boundary distance c on the lower strip".into()));
    }
    let rounds = (0..4).map(|k| build_round(params, k)).collect::<Result<Vec<_>>>()?;
    let last = &rounds[3].after;
    if last.nodes[0].position != slid.position || !same_cycle(&last.polygon, &polygon) {
        return Err(verification(&slid.position, "node did not return to its starting position"));
    }
    let composite = rounds
        .iter()
        .fold(PiecewiseMap::identity(), |acc, r| PiecewiseMap::compose(&r.shear.as_piecewise(), &acc));
    let map = RecurrenceMap {
        params: params.clone(),
        polygon,
        rounds,
        source_diagram: pi0.clone(),
        target_diagram: pi0.clone(),
        composite,
    };
    map.verify()?;
    Ok(map)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> QField {
        s.parse().unwrap()
    }

    fn pt(a: &str, b: &str) -> Point {
        Point::new(q(a), q(b))
    }

    fn params() -> ConstructionParams {
        ConstructionParams::parse("4", "2", "1/2", "1/4").unwrap()
    }

    fn map() -> RecurrenceMap {
        RecurrenceMap::for_params(&params()).unwrap()
    }

    #[test]
    fn rotate_examples() {
        let poly = build_blowup_polygon(&params()).unwrap();
        let h = q("1/4");
        let p = pt("0", "-3/4");
        assert_eq!(rotate_on_level(&poly, &h, &q("0"), &p).unwrap(), p);
        assert_eq!(rotate_on_level(&poly, &h, &q("1/4"), &p).unwrap(), pt("1/4", "-3/4"));
        assert_eq!(rotate_on_level(&poly, &h, &q("1/4"), &pt("3/2", "-3/4")).unwrap(), pt("7/4", "-1/2"));
        assert_eq!(rotate_on_level(&poly, &h, &q("39/4"), &p).unwrap(), p);
        assert!(matches!(rotate_on_level(&poly, &h, &q("1"), &pt("0", "0")), Err(Error::NotOnLevel(_))));
    }

    #[test]
    fn curve_basepoint_and_roundtrip() {
        let poly = build_blowup_polygon(&params()).unwrap();
        let curve = LevelCurve::new(&poly, &q("1/4")).unwrap();
        assert_eq!(curve.basepoint(), &pt("-7/4", "-3/4"));
        assert_eq!(curve.perimeter(), &q("39/4"));
        for p in curve.sample_points(5) {
            assert_eq!(curve.point_at(&curve.arc_of(&p).unwrap()), p);
        }
        assert_eq!(curve.point_at(&q("-1/4")), pt("-7/4", "-1/2"));
    }

    #[test]
    fn first_round_is_lower_strip_shear() {
        let m = map();
        let s = m.round_shear(0);
        assert_eq!(s, &bottom_strip_shear(&params()));
        assert_eq!(s.apply(&pt("0", "-3/4")), pt("1/4", "-3/4"));
        assert_eq!(s.apply(&pt("0", "0")), pt("0", "0"));
    }

    #[test]
    fn composite_rotates_low_levels() {
        let m = map();
        assert_eq!(m.apply_composite(&pt("0", "-3/4")), pt("1/4", "-3/4"));
        // boundary fibre on the chop edge moves by c along the boundary
        assert_eq!(m.apply_composite(&pt("2", "-1/2")), pt("2", "0"));
        assert_eq!(m.apply_composite(&pt("1", "3/8")), pt("1", "3/8"));
    }

    #[test]
    fn rounds_share_monodromy_shape() {
        let m = map();
        for r in &m.rounds {
            let lin = r.shear.map.linear_part();
            assert_eq!(lin.trace(), 2);
            assert_eq!(lin.det(), 1);
            assert!(!lin.is_identity());
            assert_eq!(r.before.nodes.len(), 1);
        }
        assert_eq!(m.target_diagram, m.source_diagram);
    }

    #[test]
    fn phi_regimes() {
        let m = RecurrenceMap::for_params(&ConstructionParams::parse("4", "2", "1/2", "1/8").unwrap()).unwrap();
        assert_eq!(m.apply_phi(&pt("0", "-3/4")).unwrap(), pt("1/4", "-3/4"));
        assert_eq!(m.apply_phi(&pt("0", "0")).unwrap(), pt("0", "0"));
        assert_eq!(m.apply_phi(&pt("1", "3/8")).unwrap(), pt("1", "3/8"));
        assert_eq!(m.apply_phi(&pt("-2", "0")).unwrap(), pt("-2", "-1/2"));
        assert_eq!(m.apply_phi(&pt("3", "0")), Err(Error::OutsidePolygon));
    }

    #[test]
    fn advance_ramp() {
        let m = map();
        assert_eq!(m.advance(&q("0")), q("1/2"));
        assert_eq!(m.advance(&q("1/4")), q("1/4"));
        assert_eq!(m.advance(&q("1/2")), q("0"));
        assert_eq!(m.advance(&q("3/4")), q("0"));
        assert_eq!(m.advance(&q("3/8")), q("1/8") * q("3/4"));
    }

    #[test]
    fn iterate_period_39() {
        let m = RecurrenceMap::for_params(&ConstructionParams::parse("4", "2", "1/2", "1/8").unwrap()).unwrap();
        let p = pt("0", "-3/4");
        assert_eq!(m.apply_phi_iter(&p, 39).unwrap(), p);
        assert_ne!(m.apply_phi_iter(&p, 13).unwrap(), p);
        let mut x = p.clone();
        for _ in 0..5 {
            x = m.apply_phi(&x).unwrap();
        }
        assert_eq!(x, m.apply_phi_iter(&p, 5).unwrap());
    }

    #[test]
    fn rejects_wrong_source() {
        let d = build_pi0(&params()).unwrap();
        let other = ConstructionParams::parse("5", "2", "1/2", "1/4").unwrap();
        assert!(build_recurrence_map(&d, &other).is_err());
    }
}
