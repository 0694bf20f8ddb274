use std::path::PathBuf;
use std::process::{Command, Output};

use intapprox::metrics::{dp6_distance, dp6_height, P1xP1Point, PointRow};
use intapprox::delpezzo6::target;
use num_rational::Ratio;

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_intapprox"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn fan(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fans")
        .join(format!("{name}.toml"))
        .to_string_lossy()
        .into_owned()
}

#[test]
fn pell_prints_fundamental_solution() {
    let o = bin(&["pell", "--d", "2"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "3 2\n");
    assert_eq!(stdout(&bin(&["pell", "--d", "61"])), "1766319049 226153980\n");
}

#[test]
fn line_alpha_reports_one() {
    let o = bin(&["dp6", "alpha", "--family", "line1", "--height-bound", "100000"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("estimate 1.00\n"));
}

#[test]
fn validation_errors_exit_two() {
    for args in [
        vec!["pell", "--d", "9"],
        vec!["dp6", "lift", "--modulus", "7", "--residue", "1,1,1,1"],
        vec!["dp6", "count", "--family", "conic", "--a", "0", "--b", "0", "--height-bound", "10"],
        vec!["dp6", "enumerate", "--height-bound", "0"],
        vec!["toric", "check", "no-such-file.toml"],
    ] {
        let o = bin(&args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        let err = String::from_utf8(o.stderr).unwrap();
        assert!(!err.is_empty());
    }
}

#[test]
fn invalid_fan_lists_violations() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("bad.toml");
    std::fs::write(&p, "dim = 2\nrays = [[2, 0], [0, 1], [-1, -1]]\nmax_cones = [[0, 1], [1, 2], [0, 2]]\n").unwrap();
    let o = bin(&["toric", "check", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).contains("ray 0 is not primitive"));
}

#[test]
fn toric_commands_on_corpus() {
    let o = bin(&["toric", "check", &fan("p1xp1")]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("ample true"));
    let o = bin(&["toric", "collections", &fan("f2")]);
    assert_eq!(stdout(&o), "central {1, 3}\nother {0, 2}\n");
    let o = bin(&["toric", "delta", &fan("p2"), "--collection", "0"]);
    assert_eq!(stdout(&o), "delta {0, 1, 2} 1\n");
    assert_eq!(bin(&["toric", "delta", &fan("p2"), "--collection", "3"]).status.code(), Some(2));
    let o = bin(&["toric", "alpha", &fan("p1xp1"), "--height-bound", "300"]);
    assert!(o.status.success());
    let s = stdout(&o);
    assert!(s.contains("delta 1\n") && s.contains("estimate 1.00\n"), "{s}");
    let o = bin(&["toric", "alpha", &fan("dp6"), "--height-bound", "200"]);
    assert!(stdout(&o).contains("not simplicial"));
    // boundary ray outside every central collection
    let o = bin(&["toric", "alpha", &fan("f2"), "--boundary-ray", "0", "--height-bound", "50"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn outputs_are_identical_across_worker_counts() {
    let dir = tempfile::tempdir().unwrap();
    let mut csvs = Vec::new();
    let mut svgs = Vec::new();
    for w in ["1", "3"] {
        let csv = dir.path().join(format!("f{w}.csv"));
        let svg = dir.path().join(format!("f{w}.svg"));
        let o = bin(&[
            "--workers", w, "dp6", "figures", "--which", "2", "--height-bound", "200",
            "--out", csv.to_str().unwrap(), "--svg", svg.to_str().unwrap(),
        ]);
        assert!(o.status.success());
        csvs.push(std::fs::read(&csv).unwrap());
        svgs.push(std::fs::read(&svg).unwrap());
    }
    assert_eq!(csvs[0], csvs[1]);
    assert_eq!(svgs[0], svgs[1]);
    let a = bin(&["--workers", "1", "dp6", "enumerate", "--height-bound", "40"]);
    let b = bin(&["--workers", "2", "dp6", "enumerate", "--height-bound", "40"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn csv_rows_round_trip() {
    let o = bin(&["dp6", "enumerate", "--height-bound", "60"]);
    let mut r = csv::Reader::from_reader(&o.stdout[..]);
    assert_eq!(
        r.headers().unwrap().iter().collect::<Vec<_>>(),
        ["s0", "s1", "t0", "t1", "H", "d_num", "d_den", "ratio"]
    );
    let x = target();
    let mut n = 0;
    for rec in r.deserialize::<PointRow>() {
        let row = rec.unwrap();
        let c = |s: &str| s.parse::<i64>().unwrap();
        let y = P1xP1Point::from_coords(c(&row.s0), c(&row.s1), c(&row.t0), c(&row.t1)).unwrap();
        assert_eq!(dp6_height(&y), c(&row.h));
        assert_eq!(dp6_distance(&x, &y), Ratio::new(c(&row.d_num), c(&row.d_den)));
        assert_eq!(PointRow::new(&y, &dp6_height(&y), &dp6_distance(&x, &y)), row);
        n += 1;
    }
    assert!(n > 100);
}

#[test]
fn figure_one_svg_has_a_circle_per_point() {
    let dir = tempfile::tempdir().unwrap();
    let svg = dir.path().join("fig1.svg");
    let o = bin(&["dp6", "figures", "--which", "1", "--height-bound", "100", "--svg", svg.to_str().unwrap()]);
    assert!(o.status.success());
    let rows = stdout(&o).lines().filter(|l| l.contains(',')).count() - 1;
    let text = std::fs::read_to_string(svg).unwrap();
    assert_eq!(text.matches("<circle").count(), rows);
    assert!(text.contains(r#"viewBox="0 0 800 800""#));
}

#[test]
fn lift_lands_in_the_class() {
    let o = bin(&["dp6", "lift", "--modulus", "11", "--residue", "2,1,1,1"]);
    assert!(o.status.success());
    let first = stdout(&o).lines().next().unwrap().to_string();
    let c: Vec<i64> = first.split(' ').map(|s| s.parse().unwrap()).collect();
    assert_eq!((c[0] * c[2] - c[1] * c[3]).abs(), 1);
    for (v, r) in c.iter().zip([2, 1, 1, 1]) {
        assert_eq!(v.rem_euclid(11), r);
    }
}
