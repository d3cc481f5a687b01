use ordlat::mordell::{build_table, mordell_step, shipped_config, shipped_densest, BoundTable, Provenance};
use ordlat::{Order, PowerProduct};

fn pp(s: &str) -> PowerProduct {
    PowerProduct::parse(s).unwrap()
}

fn table(order: &str, max_dim: u32) -> BoundTable {
    let o = Order::builtin(order).unwrap();
    let main = shipped_config(order).unwrap();
    let densest = shipped_densest(order).unwrap();
    build_table(&o, max_dim, &main, densest.as_ref()).unwrap()
}

fn mordell(t: &BoundTable, dim: u32) -> PowerProduct {
    t.row(dim).unwrap().mordell.clone().unwrap()
}

fn conjectured(t: &BoundTable, dim: u32) -> Option<PowerProduct> {
    t.row(dim).unwrap().conjectured.clone()
}

fn decimal(p: &PowerProduct) -> f64 {
    p.to_f64()
}

#[test]
fn hurwitz_exact_cells() {
    let t = table("hurwitz", 28);
    for (dim, v) in [(12, "2^(3/2)"), (16, "2^(3/2)"), (20, "2^(11/6)"), (28, "2^(23/10)")] {
        assert_eq!(mordell(&t, dim), pp(v), "dimension {dim}");
    }
    assert!(t.row(4).unwrap().mordell.is_none() && t.row(8).unwrap().mordell.is_none());
    assert_eq!(conjectured(&t, 24), Some(pp("4")));
    for dim in [4, 8, 12, 16, 20, 28] {
        assert_eq!(conjectured(&t, dim), None, "dimension {dim}");
    }
}

#[test]
fn hurwitz_dimension_24_annotation() {
    let t = table("hurwitz", 28);
    let row = t.row(24).unwrap();
    let v = decimal(row.mordell.as_ref().unwrap());
    assert!((v - 4.42139).abs() < 1e-5, "{v}");
    let note = row.annotation.as_deref().unwrap();
    assert!(note.contains("4.21390") && note.contains("4.42139"));
    assert!(t.to_markdown().contains("4.42139 [1]"));
}

#[test]
fn hurwitz_best_known_column() {
    let t = table("hurwitz", 28);
    let best = |d: u32| t.row(d).unwrap().best_known.clone().unwrap();
    assert_eq!(best(12), pp("2^(7/6)"));
    assert_eq!(best(24), pp("4"));
    assert!((decimal(&best(16)) - 3.02639).abs() < 1e-9);
    assert_eq!(t.row(28).unwrap().best_known_prov, Some(Provenance::ExternalLp));
}

#[test]
fn eisenstein_exact_cells() {
    let t = table("eisenstein", 26);
    for (dim, v) in [
        (6, "3^(1/2)"),
        (8, "2"),
        (10, "2*3^(1/6)"),
        (12, "2^(5/4)"),
        (14, "2^(13/10)*3^(1/10)"),
        (16, "2^(27/20)*3^(1/5)"),
        (26, "2^(23/11)*3^(1/22)"),
    ] {
        assert_eq!(mordell(&t, dim), pp(v), "dimension {dim}");
    }
    assert!((decimal(&mordell(&t, 16)) - 3.17552).abs() < 1e-5);
}

#[test]
fn eisenstein_decimal_cells() {
    let t = table("eisenstein", 26);
    for (dim, v) in [(18, 3.47300), (20, 3.72996), (22, 3.98416), (24, 4.23616)] {
        let got = decimal(&mordell(&t, dim));
        assert!((got - v).abs() < 1e-3, "dimension {dim}: {got}");
    }
}

#[test]
fn eisenstein_conjectured_column() {
    let t = table("eisenstein", 26);
    for (dim, v) in [
        (14, "2^(11/5)/3^(1/2)"),
        (16, "2^(3/2)"),
        (18, "2^(11/7)*3^(1/14)"),
        (20, "2^(7/4)"),
        (22, "2^(16/9)*3^(1/18)"),
        (24, "4"),
    ] {
        assert_eq!(conjectured(&t, dim), Some(pp(v)), "dimension {dim}");
    }
    for dim in [2, 4, 6, 8, 10, 12, 26] {
        assert_eq!(conjectured(&t, dim), None, "dimension {dim}");
    }
}

#[test]
fn gaussian_sharpness() {
    let g = Order::builtin("gaussian").unwrap();
    assert_eq!(mordell_step(&g, 4, &pp("2^(2/3)")).unwrap(), pp("2"));
    let t = table("gaussian", 8);
    assert_eq!(mordell(&t, 8), pp("2"));
    assert_eq!(t.row(8).unwrap().best_known, Some(pp("2")));
}

#[test]
fn csv_and_markdown_have_every_dimension() {
    let t = table("eisenstein", 26);
    let csv = t.to_csv();
    assert_eq!(csv.lines().count(), 1 + 13);
    let md = t.to_markdown();
    for dim in (2..=26).step_by(2) {
        assert!(md.contains(&format!("| {dim} |")), "dimension {dim}");
    }
}
