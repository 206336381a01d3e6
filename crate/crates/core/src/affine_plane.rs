//! Planar lattice geometry over [`QField`] coordinates.

use std::fmt;

use num_integer::Integer;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact_arith::QField;

#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(from = "[QField; 2]", into = "[QField; 2]")]
pub struct Point {
    pub x1: QField,
    pub x2: QField,
}

impl From<[QField; 2]> for Point {
    fn from([x1, x2]: [QField; 2]) -> Self {
        Point { x1, x2 }
    }
}

impl From<Point> for [QField; 2] {
    fn from(p: Point) -> Self {
        [p.x1, p.x2]
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x1, self.x2)
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl Point {
    pub fn new(x1: QField, x2: QField) -> Self {
        Point { x1, x2 }
    }

    pub fn from_ints(x1: i64, x2: i64) -> Self {
        Point::new(x1.into(), x2.into())
    }

    pub fn origin() -> Self {
        Point::from_ints(0, 0)
    }

    /// `self + t * dir`.
    pub fn offset(&self, dir: LatticeVector, t: &QField) -> Point {
        Point::new(
            &self.x1 + t * &QField::from_int(dir.u),
            &self.x2 + t * &QField::from_int(dir.v),
        )
    }

    /// Coordinate difference `self - other`.
    pub fn minus(&self, other: &Point) -> (QField, QField) {
        (&self.x1 - &other.x1, &self.x2 - &other.x2)
    }

    /// `self + t * (to - self)`.
    pub fn lerp(&self, to: &Point, t: &QField) -> Point {
        let (dx, dy) = to.minus(self);
        Point::new(&self.x1 + t * dx, &self.x2 + t * dy)
    }
}

/// 2x2 determinant of coordinate differences `(b - a) x (c - a)`.
pub fn orient(a: &Point, b: &Point, c: &Point) -> QField {
    let (ux, uy) = b.minus(a);
    let (vx, vy) = c.minus(a);
    ux * vy - uy * vx
}

/// Closed segments `[p1, p2]` and `[q1, q2]` share at least one point.
pub fn segments_touch(p1: &Point, p2: &Point, q1: &Point, q2: &Point) -> bool {
    let d1 = orient(q1, q2, p1).sign();
    let d2 = orient(q1, q2, p2).sign();
    let d3 = orient(p1, p2, q1).sign();
    let d4 = orient(p1, p2, q2).sign();
    if d1 * d2 < 0 && d3 * d4 < 0 {
        return true;
    }
    let on = |a: &Point, b: &Point, p: &Point, o: i32| o == 0 && in_box(a, b, p);
    on(q1, q2, p1, d1) || on(q1, q2, p2, d2) || on(p1, p2, q1, d3) || on(p1, p2, q2, d4)
}

fn in_box(a: &Point, b: &Point, p: &Point) -> bool {
    use std::cmp::{max, min};
    min(&a.x1, &b.x1) <= &p.x1 && &p.x1 <= max(&a.x1, &b.x1) && min(&a.x2, &b.x2) <= &p.x2 && &p.x2 <= max(&a.x2, &b.x2)
}

/// `p` lies on the closed segment `[a, b]`.
pub fn on_segment(a: &Point, b: &Point, p: &Point) -> bool {
    orient(a, b, p).is_zero() && in_box(a, b, p)
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(from = "[i64; 2]", into = "[i64; 2]")]
pub struct LatticeVector {
    pub u: i64,
    pub v: i64,
}

impl From<[i64; 2]> for LatticeVector {
    fn from([u, v]: [i64; 2]) -> Self {
        LatticeVector { u, v }
    }
}

impl From<LatticeVector> for [i64; 2] {
    fn from(w: LatticeVector) -> Self {
        [w.u, w.v]
    }
}

impl fmt::Debug for LatticeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.u, self.v)
    }
}

impl LatticeVector {
    pub const fn new(u: i64, v: i64) -> Self {
        LatticeVector { u, v }
    }

    pub fn is_zero(self) -> bool {
        self.u == 0 && self.v == 0
    }

    pub fn is_primitive(self) -> bool {
        self.u.gcd(&self.v) == 1
    }

    pub fn primitive(self) -> Result<LatticeVector> {
        if self.is_zero() {
            return Err(Error::ZeroVector);
        }
        let g = self.u.gcd(&self.v);
        Ok(LatticeVector::new(self.u / g, self.v / g))
    }

    pub fn det(self, other: LatticeVector) -> i64 {
        self.u * other.v - self.v * other.u
    }

    pub fn dot(self, p: &Point) -> QField {
        // edge normals are mostly unit or axis vectors; skip the multiplications then
        fn term(k: i64, x: &QField) -> QField {
            match k {
                0 => QField::zero(),
                1 => x.clone(),
                -1 => -x,
                _ => QField::from_int(k) * x,
            }
        }
        term(self.u, &p.x1) + term(self.v, &p.x2)
    }

    pub fn neg(self) -> LatticeVector {
        LatticeVector::new(-self.u, -self.v)
    }

    pub fn add(self, o: LatticeVector) -> LatticeVector {
        LatticeVector::new(self.u + o.u, self.v + o.v)
    }

    pub fn scale(self, k: i64) -> LatticeVector {
        LatticeVector::new(self.u * k, self.v * k)
    }

    /// Counterclockwise quarter turn.
    pub fn rot90(self) -> LatticeVector {
        LatticeVector::new(-self.v, self.u)
    }
}

/// Writes a displacement as `lambda * dir` with `dir` primitive and
/// `lambda > 0`. Fails for the zero vector and for irrational slopes.
pub fn lattice_direction(dx: &QField, dy: &QField) -> Result<(LatticeVector, QField)> {
    if dx.is_zero() && dy.is_zero() {
        return Err(Error::ZeroVector);
    }
    if dx.is_zero() {
        let dir = LatticeVector::new(0, dy.sign() as i64);
        return Ok((dir, dy.abs()));
    }
    let slope = (dy / dx).to_rational().ok_or(Error::IrrationalDirection)?;
    let to_i64 = |n: &num_bigint::BigInt| n.to_i64().ok_or(Error::IrrationalDirection);
    let mut dir = LatticeVector::new(to_i64(slope.denom())?, to_i64(slope.numer())?);
    if dx.is_negative() {
        dir = dir.neg();
    }
    let lambda = (dx / &QField::from_int(dir.u)).abs();
    Ok((dir, lambda))
}

/// Integral affine length of the segment `[a, b]`.
pub fn affine_length(a: &Point, b: &Point) -> Result<QField> {
    if a == b {
        return Ok(QField::zero());
    }
    let (dx, dy) = b.minus(a);
    lattice_direction(&dx, &dy).map(|(_, l)| l)
}

/// `x -> M x + t` with `M` in `GL(2, Z)`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct UnimodularAffineMap {
    pub m11: i64,
    pub m12: i64,
    pub m21: i64,
    pub m22: i64,
    pub t1: QField,
    pub t2: QField,
}

impl fmt::Debug for UnimodularAffineMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[[{}, {}], [{}, {}]] + ({}, {})",
            self.m11, self.m12, self.m21, self.m22, self.t1, self.t2
        )
    }
}

impl UnimodularAffineMap {
    pub fn new(m11: i64, m12: i64, m21: i64, m22: i64, t1: QField, t2: QField) -> Result<Self> {
        let det = m11 * m22 - m12 * m21;
        if det.abs() != 1 {
            return Err(Error::NotUnimodular(det));
        }
        Ok(UnimodularAffineMap { m11, m12, m21, m22, t1, t2 })
    }

    pub fn linear(m11: i64, m12: i64, m21: i64, m22: i64) -> Result<Self> {
        Self::new(m11, m12, m21, m22, QField::zero(), QField::zero())
    }

    pub fn identity() -> Self {
        Self::linear(1, 0, 0, 1).unwrap()
    }

    pub fn translation(t1: QField, t2: QField) -> Self {
        Self::new(1, 0, 0, 1, t1, t2).unwrap()
    }

    /// Linear part `m` acting around the fixed point `p`: `x -> p + m (x - p)`.
    pub fn about(&self, p: &Point) -> UnimodularAffineMap {
        let lin = self.linear_part();
        let mp = lin.apply(p);
        UnimodularAffineMap { t1: &p.x1 - &mp.x1, t2: &p.x2 - &mp.x2, ..lin }
    }

    pub fn linear_part(&self) -> UnimodularAffineMap {
        UnimodularAffineMap { t1: QField::zero(), t2: QField::zero(), ..self.clone() }
    }

    pub fn det(&self) -> i64 {
        self.m11 * self.m22 - self.m12 * self.m21
    }

    pub fn trace(&self) -> i64 {
        self.m11 + self.m22
    }

    pub fn apply(&self, p: &Point) -> Point {
        let q = |a: i64| QField::from_int(a);
        Point::new(
            q(self.m11) * &p.x1 + q(self.m12) * &p.x2 + &self.t1,
            q(self.m21) * &p.x1 + q(self.m22) * &p.x2 + &self.t2,
        )
    }

    pub fn apply_vector(&self, w: LatticeVector) -> LatticeVector {
        LatticeVector::new(self.m11 * w.u + self.m12 * w.v, self.m21 * w.u + self.m22 * w.v)
    }

    /// Pulls an inward normal back so that `<n', x> = <n, self(x)> - const`.
    pub fn transpose_vector(&self, w: LatticeVector) -> LatticeVector {
        LatticeVector::new(self.m11 * w.u + self.m21 * w.v, self.m12 * w.u + self.m22 * w.v)
    }

    /// `compose(f, g)(x) = f(g(x))`.
    pub fn compose(f: &UnimodularAffineMap, g: &UnimodularAffineMap) -> UnimodularAffineMap {
        let t = f.apply(&Point::new(g.t1.clone(), g.t2.clone()));
        UnimodularAffineMap {
            m11: f.m11 * g.m11 + f.m12 * g.m21,
            m12: f.m11 * g.m12 + f.m12 * g.m22,
            m21: f.m21 * g.m11 + f.m22 * g.m21,
            m22: f.m21 * g.m12 + f.m22 * g.m22,
            t1: t.x1,
            t2: t.x2,
        }
    }

    pub fn inverse(&self) -> UnimodularAffineMap {
        let d = self.det();
        let lin = UnimodularAffineMap {
            m11: self.m22 * d,
            m12: -self.m12 * d,
            m21: -self.m21 * d,
            m22: self.m11 * d,
            t1: QField::zero(),
            t2: QField::zero(),
        };
        let t = lin.apply(&Point::new(self.t1.clone(), self.t2.clone()));
        UnimodularAffineMap { t1: -t.x1, t2: -t.x2, ..lin }
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity()
    }
}

/// The unipotent `x -> x + k det(dir, x) dir`, conjugate to
/// `[[1, k], [0, 1]]` in a basis whose first vector is `dir`.
pub fn unipotent_fixing(dir: LatticeVector, k: i64) -> Result<UnimodularAffineMap> {
    if dir.is_zero() {
        return Err(Error::ZeroVector);
    }
    if !dir.is_primitive() {
        return Err(Error::NotPrimitive(dir.u, dir.v));
    }
    let (u, v) = (dir.u, dir.v);
    UnimodularAffineMap::linear(1 - k * u * v, k * u * u, -k * v * v, 1 + k * u * v)
}

/// Closed half-plane `<normal, x> + offset >= 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct HalfPlane {
    pub normal: LatticeVector,
    pub offset: QField,
}

impl HalfPlane {
    pub fn new(normal: LatticeVector, offset: QField) -> Self {
        HalfPlane { normal, offset }
    }

    /// Half-plane bounded by the line through `p` with inward normal `normal`.
    pub fn through(p: &Point, normal: LatticeVector) -> Self {
        HalfPlane { normal, offset: -normal.dot(p) }
    }

    pub fn eval(&self, p: &Point) -> QField {
        self.normal.dot(p) + &self.offset
    }

    pub fn contains(&self, p: &Point) -> bool {
        self.eval(p).sign() >= 0
    }

    pub fn complement(&self) -> HalfPlane {
        HalfPlane { normal: self.normal.neg(), offset: -&self.offset }
    }
}

/// Sequence of region-restricted affine maps applied in order: each stage
/// moves points inside its half-plane and leaves the rest alone.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PiecewiseMap {
    pub stages: Vec<(HalfPlane, UnimodularAffineMap)>,
}

impl PiecewiseMap {
    pub fn identity() -> Self {
        PiecewiseMap::default()
    }

    pub fn single(region: HalfPlane, map: UnimodularAffineMap) -> Self {
        PiecewiseMap { stages: vec![(region, map)] }
    }

    pub fn apply(&self, p: &Point) -> Point {
        self.stages.iter().fold(p.clone(), |x, (region, map)| {
            if region.contains(&x) {
                map.apply(&x)
            } else {
                x
            }
        })
    }

    /// `compose(f, g)(x) = f(g(x))`.
    pub fn compose(f: &PiecewiseMap, g: &PiecewiseMap) -> PiecewiseMap {
        PiecewiseMap { stages: g.stages.iter().chain(&f.stages).cloned().collect() }
    }
}
