use toric_lpr::atf_base::build_pi0;
use toric_lpr::exec::Exec;
use toric_lpr::io;
use toric_lpr::mcg_homology::brute_force_classes;
use toric_lpr::orbit::classify_batch;
use toric_lpr::recurrence_map::{build_recurrence_map, rotation_grid};
use toric_lpr::suite::{random_params, rng};
use toric_lpr::{ConstructionParams, QField};

#[test]
fn diagram_json_round_trip_rebuilds_the_map() {
    let p = ConstructionParams::parse("5", "3", "2/3", "1/5").unwrap();
    let d = build_pi0(&p).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("d.json");
    std::fs::write(&path, io::diagram_to_json(&d)).unwrap();
    let back = io::read_diagram(&path).unwrap();
    assert_eq!(back, d);
    build_recurrence_map(&back, &p).unwrap().verify().unwrap();
}

#[test]
fn random_parameters_verify() {
    let mut r = rng(31);
    for _ in 0..4 {
        let p = random_params(&mut r);
        build_recurrence_map(&build_pi0(&p).unwrap(), &p).unwrap().verify().unwrap();
    }
}

#[test]
fn mismatched_diagram_is_rejected() {
    let p = ConstructionParams::parse("4", "2", "1/2", "1/4").unwrap();
    let other = ConstructionParams::parse("4", "2", "1/3", "1/4").unwrap();
    assert!(build_recurrence_map(&build_pi0(&other).unwrap(), &p).is_err());
}

#[test]
fn executors_agree() {
    let p = ConstructionParams::parse("4", "2", "1/2", "1/8").unwrap();
    let mut levels = rotation_grid(&p, 12);
    levels.push("0/1+1/8*sqrt(2)".parse::<QField>().unwrap());
    let seq = classify_batch(&p, &levels, 500, Exec::Sequential);
    let par = classify_batch(&p, &levels, 500, Exec::Parallel);
    assert_eq!(format!("{seq:?}"), format!("{par:?}"));
    assert_eq!(brute_force_classes(12, Exec::Sequential).unwrap(), brute_force_classes(12, Exec::Parallel).unwrap());
}
