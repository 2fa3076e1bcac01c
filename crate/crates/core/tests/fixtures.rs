use netaccess::fixtures::{all, fixture, NAMES};
use netaccess::io::{emit_json, emit_matrix_csv, parse_json, parse_matrix_csv};
use netaccess::validate;

fn sums(name: &str) -> Vec<f64> {
    let n = fixture(name).unwrap().network;
    (0..n.n()).map(|i| n.row(i).iter().sum()).collect()
}

#[test]
fn catalog_is_complete_and_tagged() {
    let fx = all();
    assert_eq!(fx.iter().map(|f| f.name).collect::<Vec<_>>(), NAMES);
    for f in &fx {
        let report = validate(&f.network, f.network.default_triangle_tol());
        assert!(report.is_structurally_valid(), "{}", f.name);
        assert_eq!(report.is_metric(), !f.non_metric, "{}", f.name);
        assert!(!f.provenance.is_empty());
    }
}

#[test]
fn fig1_sums() {
    assert_eq!(sums("fig1"), vec![9.0, 10.0, 9.0, 14.0]);
}

#[test]
fn fig4_sums_all_63() {
    assert_eq!(sums("fig4"), vec![63.0; 10]);
    assert!(!validate(&fixture("fig4").unwrap().network, 1e-9).triangle_violations.is_empty());
}

#[test]
fn ralik_sums_verified_from_drawing() {
    let net = fixture("ralik").unwrap().network;
    let s = sums("ralik");
    for (name, want) in [
        ("Kwajalein", 20.0),
        ("Namu", 21.0),
        ("Ailinglaplap", 25.0),
        ("Wotho", 25.0),
        ("Lae", 26.0),
        ("Rongelap", 27.0),
        ("Ujae", 27.0),
        ("Jaluit", 32.0),
        ("Namorik", 32.0),
        ("Bikini", 34.0),
    ] {
        assert_eq!(s[net.index_of(name).unwrap()], want, "{name}");
    }
    let (b, j) = (net.index_of("Bikini").unwrap(), net.index_of("Jaluit").unwrap());
    assert_eq!(net.d(b, j), 5.0);
}

#[test]
fn fig6_sums_and_path_example() {
    let s = sums("fig6");
    assert_eq!(s[0], 17.0);
    assert_eq!(s[10], 29.0);
    for (node, want) in [(2, 21.0), (3, 22.0), (4, 22.0), (5, 22.0), (7, 22.0), (8, 26.0), (10, 27.0)] {
        assert_eq!(s[node - 1], want, "node {node}");
    }
    assert_eq!(fixture("fig6").unwrap().network.d(0, 11), 3.0);
    assert!(fixture("fig6").unwrap().provenance.contains("39"));
}

#[test]
fn fixtures_round_trip_through_text_formats() {
    for f in all() {
        assert_eq!(parse_json(&emit_json(&f.network)).unwrap(), f.network);
        assert_eq!(parse_matrix_csv(&emit_matrix_csv(&f.network)).unwrap(), f.network);
    }
}
