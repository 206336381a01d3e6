//! Convex rational polygons, Delzant polygons and the lattice distance to
//! the boundary.
//!
//! Every edge is stored as a primitive inward normal `nu` and offset `kappa`
//! so that `<nu, x> + kappa` is the integral affine distance from `x` to the
//! edge line. The distance to the boundary is the minimum of these forms and
//! its superlevel sets are inner parallel polygons obtained by shifting all
//! offsets at once.

use std::ops::Deref;

use serde::{Deserialize, Serialize};

use crate::affine_plane::{
    affine_length, lattice_direction, orient, HalfPlane, LatticeVector, Point, UnimodularAffineMap,
};
use crate::error::{Error, Result};
use crate::exact_arith::QField;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Edge {
    pub normal: LatticeVector,
    pub offset: QField,
}

impl Edge {
    pub fn eval(&self, p: &Point) -> QField {
        self.normal.dot(p) + &self.offset
    }

    pub fn half_plane(&self) -> HalfPlane {
        HalfPlane::new(self.normal, self.offset.clone())
    }
}

/// A strictly convex counterclockwise polygon whose edges all have rational
/// slopes. Edge `i` runs from vertex `i` to vertex `i + 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RationalPolygon {
    vertices: Vec<Point>,
    edges: Vec<Edge>,
    dirs: Vec<LatticeVector>,
    lengths: Vec<QField>,
}

impl RationalPolygon {
    pub fn new(vertices: Vec<Point>) -> Result<Self> {
        let n = vertices.len();
        if n < 3 {
            return Err(Error::InvalidPolygon(format!("{n} vertices")));
        }
        let mut dirs = Vec::with_capacity(n);
        let mut lengths = Vec::with_capacity(n);
        let mut edges = Vec::with_capacity(n);
        for i in 0..n {
            let (a, b) = (&vertices[i], &vertices[(i + 1) % n]);
            let (dx, dy) = b.minus(a);
            let (dir, len) = lattice_direction(&dx, &dy).map_err(|e| match e {
                Error::ZeroVector => Error::InvalidPolygon(format!("repeated vertex {i}")),
                e => e,
            })?;
            let normal = dir.rot90();
            edges.push(Edge { normal, offset: -normal.dot(a) });
            dirs.push(dir);
            lengths.push(len);
        }
        for i in 0..n {
            if dirs[i].det(dirs[(i + 1) % n]) <= 0 {
                return Err(Error::InvalidPolygon(format!("not strictly convex counterclockwise at vertex {}", (i + 1) % n)));
            }
        }
        for (i, e) in edges.iter().enumerate() {
            if vertices.iter().any(|v| e.eval(v).is_negative()) {
                return Err(Error::InvalidPolygon(format!("edge {i} does not support the polygon")));
            }
        }
        Ok(RationalPolygon { vertices, edges, dirs, lengths })
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Primitive direction of edge `i`, pointing from vertex `i` to `i + 1`.
    pub fn edge_direction(&self, i: usize) -> LatticeVector {
        self.dirs[i % self.len()]
    }

    pub fn edge_length(&self, i: usize) -> &QField {
        &self.lengths[i % self.len()]
    }

    pub fn edge_lengths(&self) -> &[QField] {
        &self.lengths
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertex(&self, i: usize) -> &Point {
        &self.vertices[i % self.len()]
    }

    pub fn perimeter(&self) -> QField {
        self.lengths.iter().cloned().sum()
    }

    /// Euclidean area, which is the lattice area normalized so that a unit
    /// lattice square has area one.
    pub fn area(&self) -> QField {
        let n = self.len();
        let twice: QField = (0..n)
            .map(|i| {
                let (a, b) = (&self.vertices[i], &self.vertices[(i + 1) % n]);
                &a.x1 * &b.x2 - &a.x2 * &b.x1
            })
            .sum();
        twice / QField::from_int(2)
    }

    /// `min_i (<nu_i, p> + kappa_i)`, negative outside.
    pub fn signed_distance(&self, p: &Point) -> QField {
        self.edges.iter().map(|e| e.eval(p)).min().expect("nonempty polygon")
    }

    pub fn contains(&self, p: &Point) -> bool {
        self.signed_distance(p).sign() >= 0
    }

    /// Integral affine distance from `p` to the boundary.
    pub fn distance_to_boundary(&self, p: &Point) -> Result<QField> {
        let d = self.signed_distance(p);
        if d.is_negative() {
            return Err(Error::OutsidePolygon);
        }
        Ok(d)
    }

    /// Maximum of the boundary distance and a maximizer, by solving the LP
    /// `max t s.t. <nu_i, x> + kappa_i >= t` exactly. The feasible region in
    /// `(x, t)` is pointed, so an optimum sits at a basic solution cut out by
    /// three tight constraints; all such candidates are enumerated and the
    /// lexicographically smallest optimal point is returned.
    pub fn max_distance(&self) -> (QField, Point) {
        let n = self.len();
        let e = &self.edges;
        let mut best: Option<(QField, Point)> = None;
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    let Some((x, t)) = solve_tight(&e[i], &e[j], &e[k]) else { continue };
                    if e.iter().any(|c| c.eval(&x) < t) {
                        continue;
                    }
                    let better = match &best {
                        None => true,
                        Some((bt, bx)) => t > *bt || (t == *bt && (&x.x1, &x.x2) < (&bx.x1, &bx.x2)),
                    };
                    if better {
                        best = Some((t, x));
                    }
                }
            }
        }
        best.expect("bounded polygon LP has a basic optimum")
    }

    /// The half-plane intersection `{<nu_i, x> + kappa_i >= h}`, i.e. the
    /// region bounded by the level set of the boundary distance at `h`.
    pub fn level_set(&self, h: &QField) -> Result<RationalPolygon> {
        if h.is_negative() {
            return Err(Error::OutOfRange(format!("level {h} is negative")));
        }
        if h.is_zero() {
            return Ok(self.clone());
        }
        let (max, _) = self.max_distance();
        if *h >= max {
            return Err(Error::DegenerateLevel(h.to_string()));
        }
        let mut poly = self.vertices.clone();
        for e in &self.edges {
            let hp = HalfPlane::new(e.normal, &e.offset - h);
            poly = clip_vertices(&poly, &hp);
        }
        RationalPolygon::new(cleanup(poly)).map_err(|_| Error::DegenerateLevel(h.to_string()))
    }

    /// Integral affine perimeter of the level set at `h`.
    pub fn level_perimeter(&self, h: &QField) -> Result<QField> {
        Ok(self.level_set(h)?.perimeter())
    }

    /// Intersection with a half-plane; `None` when nothing two-dimensional is left.
    pub fn clip(&self, hp: &HalfPlane) -> Option<RationalPolygon> {
        RationalPolygon::new(cleanup(clip_vertices(&self.vertices, hp))).ok()
    }

    pub fn transform(&self, map: &UnimodularAffineMap) -> Result<RationalPolygon> {
        let mut v: Vec<Point> = self.vertices.iter().map(|p| map.apply(p)).collect();
        if map.det() < 0 {
            v.reverse();
        }
        RationalPolygon::new(v)
    }

    /// First boundary point hit by the ray `p + t dir`, `t > 0`, from an interior `p`.
    pub fn ray_exit(&self, p: &Point, dir: LatticeVector) -> Option<Point> {
        self.edges
            .iter()
            .filter_map(|e| {
                let rate = dir.dot(&Point::new(QField::from_int(e.normal.u), QField::from_int(e.normal.v)));
                rate.is_negative().then(|| e.eval(p) / -rate)
            })
            .min()
            .map(|t| p.offset(dir, &t))
    }

    /// Determinant of the primitive edge directions emanating from vertex `i`.
    pub fn corner_determinant(&self, i: usize) -> i64 {
        let n = self.len();
        let out = self.dirs[i % n];
        let back = self.dirs[(i + n - 1) % n].neg();
        out.det(back)
    }

    pub fn is_delzant(&self) -> bool {
        (0..self.len()).all(|i| self.corner_determinant(i).abs() == 1)
    }
}

fn solve_tight(a: &Edge, b: &Edge, c: &Edge) -> Option<(Point, QField)> {
    // rows (u, v, -1) . (x1, x2, t) = -kappa
    let rows = [a, b, c].map(|e| [e.normal.u, e.normal.v, -1]);
    let det3 = |m: [[i64; 3]; 3]| {
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    };
    let det = det3(rows);
    if det == 0 {
        return None;
    }
    let rhs = [a, b, c].map(|e| -&e.offset);
    // Cramer with integer cofactors
    let solve = |col: usize| -> QField {
        let mut acc = QField::zero();
        for r in 0..3 {
            let mut minor = [[0i64; 2]; 2];
            let (mut mi, rows_other) = (0, (0..3).filter(|&x| x != r));
            for rr in rows_other {
                let mut mj = 0;
                for cc in (0..3).filter(|&x| x != col) {
                    minor[mi][mj] = rows[rr][cc];
                    mj += 1;
                }
                mi += 1;
            }
            let cof = minor[0][0] * minor[1][1] - minor[0][1] * minor[1][0];
            let sign = if (r + col) % 2 == 0 { 1 } else { -1 };
            acc = acc + &rhs[r] * &QField::from_int(sign * cof);
        }
        acc / QField::from_int(det)
    };
    let (x1, x2, t) = (solve(0), solve(1), solve(2));
    Some((Point::new(x1, x2), t))
}

fn clip_vertices(poly: &[Point], hp: &HalfPlane) -> Vec<Point> {
    let n = poly.len();
    let mut out = Vec::with_capacity(n + 1);
    for i in 0..n {
        let (p, q) = (&poly[i], &poly[(i + 1) % n]);
        let (fp, fq) = (hp.eval(p), hp.eval(q));
        if fp.sign() >= 0 {
            out.push(p.clone());
        }
        if fp.sign() * fq.sign() < 0 {
            let t = &fp / &(&fp - &fq);
            out.push(p.lerp(q, &t));
        }
    }
    out
}

/// Drops repeated and collinear vertices.
pub(crate) fn cleanup(mut v: Vec<Point>) -> Vec<Point> {
    v.dedup();
    while v.len() > 1 && v.first() == v.last() {
        v.pop();
    }
    loop {
        let n = v.len();
        if n < 3 {
            return v;
        }
        let collinear = (0..n).find(|&i| orient(&v[(i + n - 1) % n], &v[i], &v[(i + 1) % n]).is_zero());
        match collinear {
            Some(i) => {
                v.remove(i);
            }
            None => return v,
        }
    }
}

/// Convex hull (counterclockwise, no collinear points) of a point set.
pub(crate) fn convex_hull(points: &[Point]) -> Vec<Point> {
    let mut pts: Vec<Point> = points.to_vec();
    pts.sort_by(|a, b| (&a.x1, &a.x2).cmp(&(&b.x1, &b.x2)));
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let mut lower: Vec<Point> = Vec::new();
    for p in &pts {
        while lower.len() >= 2 && orient(&lower[lower.len() - 2], &lower[lower.len() - 1], p).sign() <= 0 {
            lower.pop();
        }
        lower.push(p.clone());
    }
    let mut upper: Vec<Point> = Vec::new();
    for p in pts.iter().rev() {
        while upper.len() >= 2 && orient(&upper[upper.len() - 2], &upper[upper.len() - 1], p).sign() <= 0 {
            upper.pop();
        }
        upper.push(p.clone());
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

/// A [`RationalPolygon`] whose corners are all smooth: the primitive edge
/// directions at each vertex form a basis of `Z^2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "crate::io::PolygonJson", into = "crate::io::PolygonJson")]
pub struct DelzantPolygon(RationalPolygon);

impl Deref for DelzantPolygon {
    type Target = RationalPolygon;
    fn deref(&self) -> &RationalPolygon {
        &self.0
    }
}

impl DelzantPolygon {
    pub fn new(vertices: Vec<Point>) -> Result<Self> {
        Self::from_polygon(RationalPolygon::new(vertices)?)
    }

    pub fn from_polygon(poly: RationalPolygon) -> Result<Self> {
        match (0..poly.len()).find(|&i| poly.corner_determinant(i).abs() != 1) {
            Some(i) => Err(Error::NotDelzant(i)),
            None => Ok(DelzantPolygon(poly)),
        }
    }

    pub fn as_polygon(&self) -> &RationalPolygon {
        &self.0
    }

    pub fn into_polygon(self) -> RationalPolygon {
        self.0
    }

    /// Self-intersection `s_i` of the sphere over edge `i`, from the fan
    /// relation `nu_{i-1} + nu_{i+1} = -s_i nu_i`.
    pub fn self_intersection(&self, i: usize) -> Result<i64> {
        let n = self.len();
        if i >= n {
            return Err(Error::OutOfRange(format!("edge {i} of {n}")));
        }
        let nu = self.edges()[i].normal;
        let w = self.edges()[(i + n - 1) % n].normal.add(self.edges()[(i + 1) % n].normal);
        let s = if nu.u != 0 {
            (w.u % nu.u == 0).then(|| -w.u / nu.u)
        } else {
            (w.v % nu.v == 0).then(|| -w.v / nu.v)
        };
        match s {
            Some(s) if w == nu.scale(-s) => Ok(s),
            _ => Err(Error::NotDelzant(i)),
        }
    }

    pub fn self_intersections(&self) -> Vec<i64> {
        (0..self.len()).map(|i| self.self_intersection(i).expect("Delzant fan relation")).collect()
    }

    /// Replaces vertex `i` by an edge at integral affine distance `c` along
    /// both incident edges.
    pub fn corner_chop(&self, i: usize, c: &QField) -> Result<DelzantPolygon> {
        let n = self.len();
        if i >= n {
            return Err(Error::OutOfRange(format!("vertex {i} of {n}")));
        }
        if !c.is_positive() {
            return Err(Error::InvalidParams(format!("chop size {c} must be positive")));
        }
        let prev = (i + n - 1) % n;
        if c >= self.edge_length(prev) || c >= self.edge_length(i) {
            return Err(Error::InvalidParams(format!("chop size {c} is not below both incident edge lengths")));
        }
        let v = self.vertex(i);
        let before = v.offset(self.edge_direction(prev).neg(), c);
        let after = v.offset(self.edge_direction(i), c);
        let mut verts = Vec::with_capacity(n + 1);
        for (j, p) in self.vertices().iter().enumerate() {
            if j == i {
                verts.push(before.clone());
                verts.push(after.clone());
            } else {
                verts.push(p.clone());
            }
        }
        DelzantPolygon::new(verts)
    }

    pub fn transform(&self, map: &UnimodularAffineMap) -> Result<DelzantPolygon> {
        DelzantPolygon::from_polygon(self.0.transform(map)?)
    }

    /// Rotates the vertex list so that vertex `k` comes first.
    pub fn rotate_start(&self, k: usize) -> DelzantPolygon {
        let mut v = self.vertices().to_vec();
        let n = v.len();
        v.rotate_left(k % n);
        DelzantPolygon::new(v).expect("cyclic relabelling keeps validity")
    }
}

/// Validity check on a raw vertex list: errors for non-convex or degenerate
/// input, otherwise reports whether every corner is smooth.
pub fn is_delzant(vertices: &[Point]) -> Result<bool> {
    Ok(RationalPolygon::new(vertices.to_vec())?.is_delzant())
}

/// `(a, b, c, eps)` of the one-point blow-up of `S^2 x S^2`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstructionParams {
    pub a: QField,
    pub b: QField,
    pub c: QField,
    pub eps: QField,
}

impl ConstructionParams {
    /// Requires `a >= b > 0`, `0 < c < b/2` and `0 < eps < min(c, b/2 - c)`.
    pub fn new(a: QField, b: QField, c: QField, eps: QField) -> Result<Self> {
        QField::common_field([&a, &b, &c, &eps])?;
        let half_b = &b / &QField::from_int(2);
        let bad = |m: &str| Err(Error::InvalidParams(m.to_string()));
        if !b.is_positive() || a < b {
            return bad("need a >= b > 0");
        }
        if !c.is_positive() || c >= half_b {
            return bad("need 0 < c < b/2");
        }
        if !eps.is_positive() || eps >= c || eps >= &half_b - &c {
            return bad("need 0 < eps < min(c, b/2 - c)");
        }
        Ok(ConstructionParams { a, b, c, eps })
    }

    pub fn parse(a: &str, b: &str, c: &str, eps: &str) -> Result<Self> {
        Self::new(a.parse()?, b.parse()?, c.parse()?, eps.parse()?)
    }

    /// The radicand shared by all parameters (`1` if rational).
    pub fn field(&self) -> u64 {
        QField::common_field([&self.a, &self.b, &self.c, &self.eps]).expect("validated")
    }

    pub fn half_a(&self) -> QField {
        &self.a / &QField::from_int(2)
    }

    pub fn half_b(&self) -> QField {
        &self.b / &QField::from_int(2)
    }
}

/// Rectangle `[-a/2, a/2] x [-b/2, b/2]` with corner `(a/2, -b/2)` chopped at
/// size `c`. Vertex order: `(-a/2,-b/2), (a/2-c,-b/2), (a/2,c-b/2), (a/2,b/2), (-a/2,b/2)`.
pub fn build_blowup_polygon(params: &ConstructionParams) -> Result<DelzantPolygon> {
    let (ha, hb, c) = (params.half_a(), params.half_b(), &params.c);
    DelzantPolygon::new(vec![
        Point::new(-&ha, -&hb),
        Point::new(&ha - c, -&hb),
        Point::new(ha.clone(), c - &hb),
        Point::new(ha.clone(), hb.clone()),
        Point::new(-&ha, hb.clone()),
    ])
}

/// Axis-parallel rectangle centred at the origin.
pub fn rectangle(a: &QField, b: &QField) -> Result<DelzantPolygon> {
    let two = QField::from_int(2);
    let (ha, hb) = (a / &two, b / &two);
    DelzantPolygon::new(vec![
        Point::new(-&ha, -&hb),
        Point::new(ha.clone(), -&hb),
        Point::new(ha.clone(), hb.clone()),
        Point::new(-&ha, hb),
    ])
}

/// Length of the segment `[a, b]`, which must be an edge-parallel chord.
pub fn chord_length(a: &Point, b: &Point) -> Result<QField> {
    affine_length(a, b)
}
