//! Standard toric polygons addressed by name, e.g. `CP2(3)` or
//! `Blowup_S2xS2(4,2,1/2)`.

use crate::affine_plane::Point;
use crate::delzant::{rectangle, DelzantPolygon};
use crate::error::{Error, Result};
use crate::exact_arith::QField;

/// Names of every family understood by [`catalog`], with their arity.
pub const FAMILIES: &[(&str, usize)] = &[
    ("CP2", 1),
    ("S2xS2", 2),
    ("HirzebruchF1", 2),
    ("MonotoneBlCP2", 1),
    ("Blowup_S2xS2", 3),
    ("Blowup2_S2xS2", 3),
];

/// A fixed list of entries spanning every family, including members of each
/// exceptional class and several generic applicable polygons.
pub const STANDARD_ENTRIES: &[&str] = &[
    "CP2(3)",
    "MonotoneBlCP2(1)",
    "MonotoneBlCP2(2)",
    "MonotoneBlCP2(3)",
    "S2xS2(1,1)",
    "S2xS2(2,1)",
    "Blowup_S2xS2(4,2,1/2)",
    "Blowup_S2xS2(4,2,1)",
    "Blowup2_S2xS2(4,2,1)",
    "HirzebruchF1(3,1/2)",
    "Blowup2_S2xS2(4,2,1/2)",
    "Blowup_S2xS2(3,3,1)",
];

fn parse_name(name: &str) -> Result<(&str, Vec<QField>)> {
    let unknown = || Error::UnknownCatalog(name.to_string());
    let name = name.trim();
    let open = name.find('(').ok_or_else(unknown)?;
    let inner = name[open + 1..].strip_suffix(')').ok_or_else(unknown)?;
    let args = inner
        .split(',')
        .map(|s| s.trim().parse::<QField>())
        .collect::<Result<Vec<_>>>()
        .map_err(|_| unknown())?;
    Ok((&name[..open], args))
}

/// The polygon named `name`.
///
/// * `CP2(l)`: triangle `(0,0), (l,0), (0,l)`.
/// * `S2xS2(a,b)`: rectangle `a x b` centred at the origin.
/// * `HirzebruchF1(l,c)`: `CP2(l)` with the origin corner chopped at size `c`.
/// * `MonotoneBlCP2(k)`, `k = 1, 2, 3`: `CP2(3)` with `k` of its corners
///   chopped at size one, in the order `(0,0)`, `(3,0)`, `(0,3)`.
/// * `Blowup_S2xS2(a,b,c)`: rectangle with its lower right corner chopped.
/// * `Blowup2_S2xS2(a,b,c)`: rectangle with both lower corners chopped.
pub fn catalog(name: &str) -> Result<DelzantPolygon> {
    let (family, args) = parse_name(name)?;
    let arity = FAMILIES
        .iter()
        .find(|(f, _)| *f == family)
        .map(|(_, n)| *n)
        .ok_or_else(|| Error::UnknownCatalog(name.to_string()))?;
    if args.len() != arity {
        return Err(Error::UnknownCatalog(format!("{name}: {family} takes {arity} arguments")));
    }
    if args.iter().any(|x| !x.is_positive()) {
        return Err(Error::InvalidParams(format!("{name}: arguments must be positive")));
    }
    match family {
        "CP2" => cp2(&args[0]),
        "S2xS2" => rectangle(&args[0], &args[1]),
        "HirzebruchF1" => cp2(&args[0])?.corner_chop(0, &args[1]),
        "MonotoneBlCP2" => {
            let k = args[0].to_rational().filter(|k| k.is_integer()).map(|k| k.to_integer());
            let k = match k.and_then(|k| i64::try_from(k).ok()) {
                Some(k @ 1..=3) => k,
                _ => return Err(Error::UnknownCatalog(format!("{name}: k must be 1, 2 or 3"))),
            };
            let one = QField::one();
            let mut p = cp2(&QField::from_int(3))?.corner_chop(0, &one)?;
            // after the first chop the corners (3,0) and (0,3) are vertices 2 and 3
            if k >= 2 {
                p = p.corner_chop(2, &one)?;
            }
            if k >= 3 {
                p = p.corner_chop(4, &one)?;
            }
            Ok(p)
        }
        "Blowup_S2xS2" => rectangle(&args[0], &args[1])?.corner_chop(1, &args[2]),
        "Blowup2_S2xS2" => {
            let (a, c) = (&args[0], &args[2]);
            if &(c * &QField::from_int(2)) >= a {
                return Err(Error::InvalidParams(format!("{name}: need 2c < a")));
            }
            rectangle(a, &args[1])?.corner_chop(1, c)?.corner_chop(0, c)
        }
        _ => unreachable!("family list checked above"),
    }
}

fn cp2(l: &QField) -> Result<DelzantPolygon> {
    let z = QField::zero();
    DelzantPolygon::new(vec![
        Point::new(z.clone(), z.clone()),
        Point::new(l.clone(), z.clone()),
        Point::new(z, l.clone()),
    ])
}
