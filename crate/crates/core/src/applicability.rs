//! Decides whether a Delzant polygon carries an edge that can play the role
//! of the exceptional sphere in the construction, and otherwise which
//! exceptional family it belongs to.

use serde::{Deserialize, Serialize};

use crate::delzant::DelzantPolygon;
use crate::exact_arith::QField;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ExceptionTag {
    #[serde(rename = "monotone")]
    Monotone,
    #[serde(rename = "product_unequal")]
    ProductUnequal,
    #[serde(rename = "half-size-blowup-1")]
    HalfSizeBlowup1,
    #[serde(rename = "half-size-blowup-2")]
    HalfSizeBlowup2,
    #[serde(rename = "none")]
    Unmatched,
}

impl ExceptionTag {
    pub fn as_str(self) -> &'static str {
        match self {
            ExceptionTag::Monotone => "monotone",
            ExceptionTag::ProductUnequal => "product_unequal",
            ExceptionTag::HalfSizeBlowup1 => "half-size-blowup-1",
            ExceptionTag::HalfSizeBlowup2 => "half-size-blowup-2",
            ExceptionTag::Unmatched => "none",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ApplicabilityReport {
    pub applicable: bool,
    pub witness_edge: Option<usize>,
    pub witness_length: Option<QField>,
    #[serde(rename = "max_F")]
    pub max_f: QField,
    /// Set only for polygons that are not applicable.
    pub exception_tag: Option<ExceptionTag>,
}

/// Every edge is at the same lattice distance from the inradius maximizer,
/// i.e. the polygon is a dilate of a reflexive polygon centred there.
pub fn monotone_test(poly: &DelzantPolygon) -> bool {
    let (t, x) = poly.max_distance();
    poly.edges().iter().all(|e| e.eval(&x) == t)
}

fn cyclic_match(s: &[i64], pattern: &[i64]) -> Option<usize> {
    let n = s.len();
    if n != pattern.len() {
        return None;
    }
    (0..n).find(|&k| (0..n).all(|i| s[(k + i) % n] == pattern[i]))
}

fn tag(poly: &DelzantPolygon) -> ExceptionTag {
    if monotone_test(poly) {
        return ExceptionTag::Monotone;
    }
    let s = poly.self_intersections();
    let len = |i: usize| poly.edge_length(i).clone();
    match s.len() {
        4 if s.iter().all(|&x| x == 0) => ExceptionTag::ProductUnequal,
        5 => match cyclic_match(&s, &[0, 0, -1, -1, -1]) {
            Some(k) => {
                let shorter = len(k).min(len(k + 1));
                if len(k + 3) * QField::from_int(2) == shorter {
                    ExceptionTag::HalfSizeBlowup1
                } else {
                    ExceptionTag::Unmatched
                }
            }
            None => ExceptionTag::Unmatched,
        },
        6 if s.iter().all(|&x| x == -1) || cyclic_match(&s, &[-2, -1, -1, 0, -1, -1]).is_some() => {
            ExceptionTag::HalfSizeBlowup2
        }
        _ => ExceptionTag::Unmatched,
    }
}

/// Applicable when some edge has self-intersection `-1` and length below the
/// maximum boundary distance; the shortest such edge is the witness.
pub fn check_applicable(poly: &DelzantPolygon) -> ApplicabilityReport {
    let (max_f, _) = poly.max_distance();
    let witness = poly
        .self_intersections()
        .iter()
        .enumerate()
        .filter(|&(i, &s)| s == -1 && poly.edge_length(i) < &max_f)
        .map(|(i, _)| i)
        .min_by(|&i, &j| poly.edge_length(i).cmp(poly.edge_length(j)).then(i.cmp(&j)));
    match witness {
        Some(i) => ApplicabilityReport {
            applicable: true,
            witness_edge: Some(i),
            witness_length: Some(poly.edge_length(i).clone()),
            max_f,
            exception_tag: None,
        },
        None => ApplicabilityReport {
            applicable: false,
            witness_edge: None,
            witness_length: None,
            max_f,
            exception_tag: Some(tag(poly)),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::affine_plane::UnimodularAffineMap;
    use crate::catalog::catalog;

    fn q(s: &str) -> QField {
        s.parse().unwrap()
    }

    fn report(name: &str) -> ApplicabilityReport {
        check_applicable(&catalog(name).unwrap())
    }

    #[test]
    fn blowup_is_applicable() {
        let r = report("Blowup_S2xS2(4,2,1/2)");
        assert!(r.applicable);
        assert_eq!(r.witness_edge, Some(1));
        assert_eq!(r.witness_length, Some(q("1/2")));
        assert_eq!(r.max_f, q("1"));
    }

    #[test]
    fn exception_families() {
        assert_eq!(report("S2xS2(1,1)").exception_tag, Some(ExceptionTag::Monotone));
        assert_eq!(report("S2xS2(2,1)").exception_tag, Some(ExceptionTag::ProductUnequal));
        assert_eq!(report("Blowup_S2xS2(4,2,1)").exception_tag, Some(ExceptionTag::HalfSizeBlowup1));
        assert_eq!(report("Blowup2_S2xS2(4,2,1)").exception_tag, Some(ExceptionTag::HalfSizeBlowup2));
        assert_eq!(report("MonotoneBlCP2(1)").exception_tag, Some(ExceptionTag::Monotone));
    }

    #[test]
    fn monotone_examples() {
        assert!(monotone_test(&catalog("CP2(3)").unwrap()));
        assert!(!monotone_test(&catalog("S2xS2(4,2)").unwrap()));
        assert!(monotone_test(&catalog("MonotoneBlCP2(3)").unwrap()));
    }

    #[test]
    fn invariant_under_lattice_maps() {
        let maps = [
            UnimodularAffineMap::new(1, 1, 0, 1, q("3"), q("-1/2")).unwrap(),
            UnimodularAffineMap::new(0, -1, 1, 0, q("0"), q("0")).unwrap(),
            UnimodularAffineMap::new(2, 1, 1, 1, q("1/3"), q("0")).unwrap(),
            UnimodularAffineMap::new(1, 0, 0, -1, q("0"), q("0")).unwrap(),
        ];
        for name in crate::catalog::STANDARD_ENTRIES {
            let p = catalog(name).unwrap();
            let r = check_applicable(&p);
            for m in &maps {
                let r2 = check_applicable(&p.transform(m).unwrap());
                assert_eq!(r.applicable, r2.applicable, "{name}");
                assert_eq!(r.exception_tag, r2.exception_tag, "{name}");
                assert_eq!(r.max_f, r2.max_f, "{name}");
            }
        }
    }

    #[test]
    fn report_json_names() {
        let s = serde_json::to_string(&report("Blowup_S2xS2(4,2,1)")).unwrap();
        assert!(s.contains("\"max_F\":\"1/1\""), "{s}");
        assert!(s.contains("\"exception_tag\":\"half-size-blowup-1\""), "{s}");
    }
}
