//! Almost-toric base diagrams: a Delzant polygon decorated with nodes, their
//! eigenlines and branch cuts, together with the moves that change them.
//!
//! Cut `i` always belongs to node `i`. A cut is a polyline that starts at
//! its node, leaves it along the eigenline and ends on the boundary.

use serde::{Deserialize, Serialize};

use crate::affine_plane::{
    lattice_direction, orient, segments_touch, unipotent_fixing, HalfPlane, LatticeVector, PiecewiseMap, Point,
    UnimodularAffineMap,
};
use crate::delzant::{build_blowup_polygon, convex_hull, ConstructionParams, DelzantPolygon};
use crate::error::{Error, Result};
use crate::exact_arith::QField;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Node {
    #[serde(rename = "pos")]
    pub position: Point,
    #[serde(rename = "eigen")]
    pub eigen_dir: LatticeVector,
    #[serde(default = "one", skip_serializing_if = "is_one")]
    pub multiplicity: u32,
}

fn one() -> u32 {
    1
}

fn is_one(m: &u32) -> bool {
    *m == 1
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct BranchCut {
    pub path: Vec<Point>,
}

impl BranchCut {
    pub fn straight(from: Point, to: Point) -> Self {
        BranchCut { path: vec![from, to] }
    }

    pub fn segments(&self) -> impl Iterator<Item = (&Point, &Point)> {
        self.path.windows(2).map(|w| (&w[0], &w[1]))
    }
}

/// Closed interval of boundary-distance levels.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelBand {
    pub lo: QField,
    pub hi: QField,
}

impl LevelBand {
    /// Whether the band lies inside the open interval `(lo, hi)`.
    pub fn inside_open(&self, lo: &QField, hi: &QField) -> bool {
        &self.lo > lo && &self.hi < hi
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sweep {
    Clockwise,
    Counterclockwise,
}

impl Sweep {
    /// Power of the monodromy applied to the swept region.
    pub fn exponent(self) -> i64 {
        match self {
            Sweep::Clockwise => -1,
            Sweep::Counterclockwise => 1,
        }
    }

    pub fn reversed(self) -> Sweep {
        match self {
            Sweep::Clockwise => Sweep::Counterclockwise,
            Sweep::Counterclockwise => Sweep::Clockwise,
        }
    }
}

/// One applied move, kept so that a diagram records how it was reached.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "move", rename_all = "snake_case")]
pub enum Move {
    Trade { vertex: usize, param: QField, node: usize },
    Slide { node: usize, from: Point, to: Point, band: LevelBand },
    Transfer { node: usize, sweep: Sweep, region: HalfPlane },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BaseDiagram {
    pub polygon: DelzantPolygon,
    pub nodes: Vec<Node>,
    pub cuts: Vec<BranchCut>,
    #[serde(default)]
    pub provenance: Vec<Move>,
}

fn move_err(msg: impl Into<String>) -> Error {
    Error::Move(msg.into())
}

impl BaseDiagram {
    /// The toric diagram of `polygon`: no nodes, no cuts.
    pub fn toric(polygon: DelzantPolygon) -> Self {
        BaseDiagram { polygon, nodes: Vec::new(), cuts: Vec::new(), provenance: Vec::new() }
    }

    pub fn erase_provenance(&self) -> BaseDiagram {
        BaseDiagram { provenance: Vec::new(), ..self.clone() }
    }

    /// Boundary distance of node `i`.
    pub fn node_level(&self, i: usize) -> QField {
        self.polygon.signed_distance(&self.nodes[i].position)
    }

    /// Checks the structural invariants; returns the first violation.
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Move(m));
        if self.nodes.len() != self.cuts.len() {
            return bad(format!("{} nodes but {} cuts", self.nodes.len(), self.cuts.len()));
        }
        for (i, (node, cut)) in self.nodes.iter().zip(&self.cuts).enumerate() {
            if !node.eigen_dir.is_primitive() {
                return bad(format!("node {i} has non-primitive eigen direction"));
            }
            if !self.polygon.signed_distance(&node.position).is_positive() {
                return bad(format!("node {i} is not in the interior"));
            }
            if cut.path.len() < 2 || cut.path[0] != node.position {
                return bad(format!("cut {i} does not start at its node"));
            }
            for (a, b) in cut.segments() {
                let (dx, dy) = b.minus(a);
                lattice_direction(&dx, &dy).map_err(|e| Error::Move(format!("cut {i}: {e}")))?;
                if !self.polygon.contains(b) {
                    return bad(format!("cut {i} leaves the polygon"));
                }
            }
            if !self.polygon.signed_distance(cut.path.last().unwrap()).is_zero() {
                return bad(format!("cut {i} does not end on the boundary"));
            }
            let first = direction(&cut.path[0], &cut.path[1])?;
            if first.det(node.eigen_dir) != 0 {
                return bad(format!("cut {i} leaves its node off the eigenline"));
            }
        }
        for i in 0..self.cuts.len() {
            for j in i + 1..self.cuts.len() {
                if cuts_touch(&self.cuts[i], &self.cuts[j]) {
                    return bad(format!("cuts {i} and {j} meet"));
                }
            }
        }
        Ok(())
    }

    /// Adds a node near vertex `vertex` on the ray along the sum of the two
    /// outgoing primitive edge directions, at parameter `param` along the
    /// primitive eigen direction, joined to the vertex by a straight cut.
    pub fn nodal_trade(&self, vertex: usize, param: &QField) -> Result<BaseDiagram> {
        let n = self.polygon.len();
        if vertex >= n {
            return Err(Error::OutOfRange(format!("vertex {vertex} of {n}")));
        }
        if self.polygon.corner_determinant(vertex).abs() != 1 {
            return Err(Error::NotDelzant(vertex));
        }
        if !param.is_positive() {
            return Err(move_err("trade parameter must be positive"));
        }
        let v = self.polygon.vertex(vertex).clone();
        let out = self.polygon.edge_direction(vertex);
        let back = self.polygon.edge_direction(vertex + n - 1).neg();
        let eigen = out.add(back).primitive()?;
        let pos = v.offset(eigen, param);
        if !self.polygon.signed_distance(&pos).is_positive() {
            return Err(move_err("traded node would not be interior"));
        }
        let cut = BranchCut::straight(pos.clone(), v);
        if let Some(j) = self.cuts.iter().position(|c| cuts_touch(c, &cut)) {
            return Err(move_err(format!("trade at vertex {vertex} collides with cut {j}")));
        }
        let mut d = self.clone();
        d.nodes.push(Node { position: pos, eigen_dir: eigen, multiplicity: 1 });
        d.cuts.push(cut);
        d.provenance.push(Move::Trade { vertex, param: param.clone(), node: d.nodes.len() - 1 });
        Ok(d)
    }

    /// Moves node `node` along its eigenline to `to`, lengthening or
    /// shortening its cut, and records the band of levels swept.
    pub fn nodal_slide(&self, node: usize, to: &Point) -> Result<BaseDiagram> {
        let nd = self.nodes.get(node).ok_or_else(|| Error::OutOfRange(format!("node {node}")))?;
        let from = &nd.position;
        if from == to {
            return Ok(self.clone());
        }
        if direction(from, to)?.det(nd.eigen_dir) != 0 {
            return Err(move_err("target is off the eigenline"));
        }
        if !self.polygon.signed_distance(to).is_positive() {
            return Err(move_err("slide leaves the polygon interior"));
        }
        let swept = BranchCut::straight(from.clone(), to.clone());
        for (j, c) in self.cuts.iter().enumerate() {
            if j != node && cuts_touch(c, &swept) {
                return Err(move_err(format!("slide crosses cut {j}")));
            }
        }
        for (j, other) in self.nodes.iter().enumerate() {
            if j != node && crate::affine_plane::on_segment(from, to, &other.position) {
                return Err(move_err(format!("slide runs into node {j}")));
            }
        }
        let cut = &self.cuts[node].path;
        let toward_cut = direction(from, to)? == direction(&cut[0], &cut[1])?;
        if toward_cut && !crate::affine_plane::on_segment(&cut[0], &cut[1], to) {
            return Err(move_err("slide passes the first bend of its cut"));
        }
        let mut path = cut.clone();
        path[0] = to.clone();
        let band = level_band(&self.polygon, from, to);
        let mut d = self.clone();
        d.nodes[node].position = to.clone();
        d.cuts[node].path = path;
        d.provenance.push(Move::Slide { node, from: from.clone(), to: to.clone(), band });
        Ok(d)
    }

    /// Swings the straight cut of `node` to the opposite ray of its
    /// eigenline. The half-plane `R` swept on the way (to the right of the
    /// old cut for a clockwise sweep) is re-coordinatized by the node's
    /// monodromy `unipotent_fixing(eigen, -1)` based at the node, or its
    /// inverse for a counterclockwise sweep. Returns the new diagram and the
    /// coordinate change, which is the identity off `R`.
    pub fn cut_transfer(&self, node: usize, new_cut: &BranchCut, sweep: Sweep) -> Result<(BaseDiagram, PiecewiseMap)> {
        let nd = self.nodes.get(node).ok_or_else(|| Error::OutOfRange(format!("node {node}")))?;
        let old = &self.cuts[node];
        if old.path.len() != 2 || new_cut.path.len() != 2 {
            return Err(move_err("only straight cuts can be transferred"));
        }
        if new_cut.path[0] != nd.position {
            return Err(move_err("new cut does not start at the node"));
        }
        let d_old = direction(&old.path[0], &old.path[1])?;
        let d_new = direction(&new_cut.path[0], &new_cut.path[1])?;
        if d_new != d_old.neg() {
            return Err(move_err("new cut must run along the opposite eigen ray"));
        }
        let right = d_old.rot90().neg();
        let region = match sweep {
            Sweep::Clockwise => HalfPlane::through(&nd.position, right),
            Sweep::Counterclockwise => HalfPlane::through(&nd.position, right.neg()),
        };
        for (j, other) in self.nodes.iter().enumerate() {
            if j != node && region.contains(&other.position) {
                return Err(move_err(format!("node {j} lies in the swept region")));
            }
        }
        for (j, c) in self.cuts.iter().enumerate() {
            if j != node && c.path.iter().any(|p| region.contains(p)) {
                return Err(move_err(format!("cut {j} meets the swept region")));
            }
        }
        let mono = unipotent_fixing(nd.eigen_dir, sweep.exponent())?.about(&nd.position);
        let polygon = transfer_polygon(&self.polygon, &region, &mono)?;
        if !polygon.signed_distance(&new_cut.path[1]).is_zero() {
            return Err(move_err("new cut does not end on the boundary"));
        }
        let mut d = self.clone();
        d.polygon = polygon;
        d.cuts[node] = new_cut.clone();
        d.provenance.push(Move::Transfer { node, sweep, region: region.clone() });
        d.validate()?;
        Ok((d, PiecewiseMap::single(region, mono)))
    }

    /// The straight cut from node `node` along the ray opposite to its
    /// current cut, ending where that ray leaves the transferred polygon.
    pub fn opposite_cut(&self, node: usize, sweep: Sweep) -> Result<BranchCut> {
        let nd = &self.nodes[node];
        let old = &self.cuts[node];
        let d_new = direction(&old.path[0], &old.path[1])?.neg();
        let right = d_new.rot90();
        let region = match sweep {
            Sweep::Clockwise => HalfPlane::through(&nd.position, right),
            Sweep::Counterclockwise => HalfPlane::through(&nd.position, right.neg()),
        };
        let mono = unipotent_fixing(nd.eigen_dir, sweep.exponent())?.about(&nd.position);
        let poly = transfer_polygon(&self.polygon, &region, &mono)?;
        let end = poly.ray_exit(&nd.position, d_new).ok_or_else(|| move_err("ray does not exit"))?;
        Ok(BranchCut::straight(nd.position.clone(), end))
    }
}

/// Convex hull of the untouched part and the re-coordinatized part; rejects
/// the move if the two pieces do not glue to a convex polygon.
fn transfer_polygon(poly: &DelzantPolygon, region: &HalfPlane, mono: &UnimodularAffineMap) -> Result<DelzantPolygon> {
    let inside = poly.clip(region);
    let outside = poly.clip(&region.complement());
    let mut pts = Vec::new();
    let mut area = QField::zero();
    if let Some(p) = &outside {
        pts.extend(p.vertices().iter().cloned());
        area = area + p.area();
    }
    if let Some(p) = &inside {
        let moved = p.transform(mono)?;
        pts.extend(moved.vertices().iter().cloned());
        area = area + moved.area();
    }
    let hull = crate::delzant::RationalPolygon::new(convex_hull(&pts))?;
    if hull.area() != area {
        return Err(move_err("transferred pieces do not form a convex polygon"));
    }
    DelzantPolygon::from_polygon(hull).map_err(|_| move_err("transferred polygon is not Delzant"))
}

fn direction(a: &Point, b: &Point) -> Result<LatticeVector> {
    let (dx, dy) = b.minus(a);
    Ok(lattice_direction(&dx, &dy)?.0)
}

fn cuts_touch(a: &BranchCut, b: &BranchCut) -> bool {
    a.segments().any(|(p1, p2)| b.segments().any(|(q1, q2)| segments_touch(p1, p2, q1, q2)))
}

/// `[min, max]` of the boundary distance over the segment `[p, q]`. The
/// distance is concave, so the minimum sits at an endpoint and the maximum at
/// an endpoint or where two edge forms cross.
pub fn level_band(poly: &DelzantPolygon, p: &Point, q: &Point) -> LevelBand {
    let f = |x: &Point| poly.signed_distance(x);
    let (fp, fq) = (f(p), f(q));
    let lo = fp.clone().min(fq.clone());
    let mut hi = fp.max(fq);
    let edges = poly.edges();
    let starts: Vec<QField> = edges.iter().map(|e| e.eval(p)).collect();
    let slopes: Vec<QField> = edges.iter().zip(&starts).map(|(e, s)| e.eval(q) - s).collect();
    for i in 0..edges.len() {
        for j in i + 1..edges.len() {
            let ds = &slopes[i] - &slopes[j];
            if ds.is_zero() {
                continue;
            }
            let t = (&starts[j] - &starts[i]) / ds;
            if t.is_positive() && t < QField::one() {
                let v = f(&p.lerp(q, &t));
                if v > hi {
                    hi = v;
                }
            }
        }
    }
    LevelBand { lo, hi }
}

/// The corner points at boundary distance `c` where the strip lines of the
/// construction cross, counterclockwise from the lower right:
/// `(a/2-c, c-b/2), (c-a/2, c-b/2), (c-a/2, b/2-c), (a/2-c, b/2-c)`.
pub fn strip_corners(params: &ConstructionParams) -> [Point; 4] {
    let (ha, hb, c) = (params.half_a(), params.half_b(), &params.c);
    let (xr, xl) = (&ha - c, c - &ha);
    let (yb, yt) = (c - &hb, &hb - c);
    [
        Point::new(xr.clone(), yb.clone()),
        Point::new(xl.clone(), yb),
        Point::new(xl, yt.clone()),
        Point::new(xr, yt),
    ]
}

/// Index of the node that is slid to boundary distance `c` in [`build_pi0`].
pub const SLID_NODE: usize = 2;

/// The diagram `pi_0`: the blow-up polygon with a node traded into every
/// corner at parameter `eps/2`, and the node at the lower end of the right
/// edge slid left along its horizontal eigenline to the strip corner
/// `(a/2-c, c-b/2)`, which sits at boundary distance `c`.
pub fn build_pi0(params: &ConstructionParams) -> Result<BaseDiagram> {
    let poly = build_blowup_polygon(params)?;
    let t = &params.eps / &QField::from_int(2);
    let mut d = BaseDiagram::toric(poly.clone());
    for v in 0..poly.len() {
        d = d.nodal_trade(v, &t)?;
    }
    let [p0, ..] = strip_corners(params);
    d = d.nodal_slide(SLID_NODE, &p0)?;
    d.validate()?;
    Ok(d)
}

/// Whether `p` is on the open segment `(a, b)` of a straight cut, which is
/// where crossing it changes charts.
pub fn crosses_cut(cut: &BranchCut, a: &Point, b: &Point) -> bool {
    cut.segments().any(|(p, q)| {
        let o1 = orient(p, q, a).sign();
        let o2 = orient(p, q, b).sign();
        let o3 = orient(a, b, p).sign();
        let o4 = orient(a, b, q).sign();
        o1 * o2 < 0 && o3 * o4 < 0
    })
}
