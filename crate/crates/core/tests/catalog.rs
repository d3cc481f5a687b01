use std::path::Path;

use num_bigint::BigInt;
use ordlat::catalog::{self, list_entries, verify_entry};
use ordlat::num::Rational;
use ordlat::reduction::{self, EnumOptions};
use ordlat::{io, Error, PowerProduct};

const REQUIRED: [&str; 12] = [
    "A2/eisenstein",
    "D4/hurwitz",
    "D4/gaussian",
    "E6/eisenstein",
    "E8/hurwitz",
    "E8/eisenstein",
    "K12/eisenstein",
    "K12/j",
    "Λ12min/hurwitz",
    "Λ12max/hurwitz",
    "Λ16/hurwitz",
    "Λ24/hurwitz",
];

fn q(s: &str) -> Rational {
    ordlat::num::parse_rational(s).unwrap()
}

#[test]
fn required_entries_are_listed() {
    let names = list_entries();
    for n in REQUIRED {
        assert!(names.iter().any(|x| x == n), "{n}");
    }
}

#[test]
fn every_entry_verifies() {
    let opts = EnumOptions::default();
    for n in REQUIRED {
        let r = verify_entry(n, &opts, None).unwrap();
        assert!(r.passed, "{n}: {r:?}");
        assert_eq!(r.kissing_checked, n != "Λ24/hurwitz", "{n}");
    }
}

#[test]
fn gamma_powers_match_table_values() {
    // (entry, tabulated gamma, n, gamma^n)
    let cases = [
        ("A2/eisenstein", "2/3^(1/2)", 2, "4/3"),
        ("D4/hurwitz", "2^(1/2)", 4, "4"),
        ("E6/eisenstein", "2/3^(1/6)", 6, "64/3"),
        ("E8/hurwitz", "2", 8, "256"),
        ("K12/eisenstein", "4/3^(1/2)", 12, "16777216/729"),
        ("Λ12min/hurwitz", "2^(7/6)", 12, "16384"),
        ("Λ12max/hurwitz", "2^(7/6)", 12, "16384"),
        ("Λ16/hurwitz", "2^(3/2)", 16, "16777216"),
    ];
    let opts = EnumOptions::default();
    for (name, gamma, n, nth) in cases {
        let l = catalog::load(name).unwrap();
        let h = reduction::hermite(&l, &opts).unwrap();
        assert_eq!(h.n, n);
        assert_eq!(h.gamma_nth, q(nth), "{name}");
        let tab = PowerProduct::parse(gamma).unwrap().pow_int(n as i64);
        assert_eq!(tab.to_rational(), Some(q(nth)), "{name}");
    }
}

#[test]
fn leech_minimum_and_determinant() {
    let l = catalog::load("L24/hurwitz").unwrap();
    assert_eq!(l.determinant(), q("1"));
    assert_eq!(reduction::shortest_norm(&l, &EnumOptions::default()).unwrap(), q("4"));
}

#[test]
fn scalings_follow_the_catalog_convention() {
    let d4 = catalog::load("D4/hurwitz").unwrap();
    assert_eq!(d4.determinant(), q("1/4"));
    assert_eq!(d4.m(), 1);
    let e8 = catalog::load("E8/hurwitz").unwrap();
    assert_eq!(e8.determinant(), q("1"));
    let k12 = catalog::load("K12/eisenstein").unwrap();
    assert_eq!(k12.determinant(), Rational::from_integer(BigInt::from(729)));
}

#[test]
fn loaded_lattices_are_modules() {
    for n in REQUIRED {
        assert!(catalog::load(n).unwrap().check_o_invariance().passed(), "{n}");
    }
}

#[test]
fn export_round_trips() {
    let dir = std::env::temp_dir().join(format!("ordlat-catalog-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    for n in ["E8/hurwitz", "K12/j", "Λ12min/hurwitz"] {
        let path = dir.join(n.replace('/', "_") + ".json");
        catalog::export_entry(n, &path).unwrap();
        let back = io::read_lattice(&path).unwrap();
        let orig = catalog::load(n).unwrap();
        assert_eq!(back.zlattice().hnf(), orig.zlattice().hnf(), "{n}");
        assert_eq!(back.order(), orig.order());
    }
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn export_to_unwritable_path_fails_with_path() {
    let path = Path::new("/nonexistent-dir/sub/e8.json");
    match catalog::export_entry("E8/hurwitz", path) {
        Err(Error::Io { path: p, .. }) => assert_eq!(p, path),
        other => panic!("{other:?}"),
    }
}

#[test]
fn unknown_entry() {
    assert!(matches!(catalog::load("Λ99/hurwitz"), Err(Error::UnknownEntry(_))));
}
