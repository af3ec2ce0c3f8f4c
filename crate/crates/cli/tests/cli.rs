use std::process::{Command, Output};

use mdsum::exactnum::rat;
use mdsum::mzvlimit::MzvValue;
use mdsum::{OnePolynomial, QSeries, Relation, WordSum};
use serde_json::Value;

fn mdsum(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_mdsum"));
    for var in ["MDSUM_ORDER", "MDSUM_MZV_ERROR", "MDSUM_FORMAT", "MDSUM_THREADS"] {
        cmd.env_remove(var);
    }
    cmd.args(args).envs(env.iter().copied()).output().expect("binary runs")
}

fn ok(args: &[&str]) -> String {
    let out = mdsum(args, &[]);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn json(args: &[&str]) -> Value {
    let mut a = args.to_vec();
    a.extend(["--format", "json"]);
    serde_json::from_str(&ok(&a)).unwrap()
}

#[test]
fn series_of_one_is_divisor_count() {
    assert_eq!(ok(&["series", "1", "--order", "3"]).trim(), "q + 2*q^2 + 2*q^3 + O(q^4)");
}

#[test]
fn zero_part_is_a_usage_error() {
    assert_eq!(mdsum(&["series", "0"], &[]).status.code(), Some(2));
    assert_eq!(mdsum(&["series", "1,x"], &[]).status.code(), Some(2));
    assert_eq!(mdsum(&["verify", "--suite", "other"], &[]).status.code(), Some(2));
    assert_eq!(mdsum(&["series", "2", "--order", "0"], &[]).status.code(), Some(2));
}

#[test]
fn series_json_round_trips() {
    let v = json(&["series", "4,2", "--order", "8"]);
    let s = QSeries::from_json(&v["series"]).unwrap();
    let want = [0, 0, 0, 1, 3, 15, 27, 78, 135];
    for (n, w) in want.iter().enumerate() {
        assert_eq!(s.coefficients()[n], rat(*w, 6));
    }
    assert_eq!(s.to_json(), v["series"]);
}

#[test]
fn order_from_environment_and_flag() {
    let env = mdsum(&["series", "1"], &[("MDSUM_ORDER", "2")]);
    assert_eq!(String::from_utf8_lossy(&env.stdout).trim(), "q + 2*q^2 + O(q^3)");
    let flag = mdsum(&["series", "1", "--order", "1"], &[("MDSUM_ORDER", "2")]);
    assert_eq!(String::from_utf8_lossy(&flag.stdout).trim(), "q + O(q^2)");
    let fmt = mdsum(&["series", "1", "--order", "1"], &[("MDSUM_FORMAT", "csv")]);
    assert_eq!(String::from_utf8_lossy(&fmt.stdout), "n,coefficient\n0,0/1\n1,1/1\n");
}

#[test]
fn product_matches_printed_terms() {
    let v = json(&["product", "1", "2,1"]);
    assert_eq!(v["check"]["pass"], true);
    let p = WordSum::from_json(&v["product"]).unwrap();
    assert_eq!(p, WordSum::parse("[1,2,1] + 2[2,1,1] - 3/2[2,1] + [2,2] + [3,1]").unwrap());
    assert_eq!(p.to_json(), v["product"]);
}

#[test]
fn derive_matches_printed_expansion() {
    let v = json(&["derive", "2,1,1", "--order", "60"]);
    let d = WordSum::from_json(&v["derivative"]).unwrap();
    let want = "-1/6[2,1,1] + 1/2[2,1,2] - [2,1,2,1] + [2,1,3] + 3/2[2,2,1] - 2[2,2,1,1] + [2,3,1] + 6[3,1,1] - 8[3,1,1,1] + [4,1,1]";
    assert_eq!(d, WordSum::parse(want).unwrap());
    assert_eq!(v["check"]["order"], 60);
}

#[test]
fn decompose_one_two() {
    let v = json(&["decompose", "1,2"]);
    let p = OnePolynomial::from_json(&v["polynomial"]).unwrap();
    assert_eq!(p.coefficient(1), WordSum::parse("[2]").unwrap());
    assert_eq!(p.coefficient(0), WordSum::parse("-[2,1] - [3] + 1/2[2]").unwrap());
    assert_eq!(p.degree(), Some(1));
}

#[test]
fn relations_weight_four() {
    let v = json(&["relations", "--weight", "4", "--length", "2"]);
    let rels = v.as_array().unwrap();
    assert_eq!(rels.len(), 1);
    let r = Relation::from_json(&rels[0]).unwrap();
    assert!(r.equivalent_to(&WordSum::parse("[4] - 2[2,2] + 2[3,1] - [3] + 1/3[2]").unwrap()));
    assert_eq!(r.to_json(), rels[0]);
}

#[test]
fn dims_table_rows() {
    let csv = ok(&["dims", "--space", "mda", "--max-weight", "6", "--order", "120", "--format", "csv"]);
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("space,kind,k,l,value,certainty"));
    let rows: Vec<&str> = lines.collect();
    for want in ["MDA,fil,6,3,18,", "MDA,fil,5,5,13,", "MDA,fil,6,6,23,", "MDA,gr,6,2,2,"] {
        assert!(rows.iter().any(|r| r.starts_with(want)), "{want} missing");
    }
}

#[test]
fn dims_certified_cells_are_exact() {
    let csv = ok(&["dims", "--space", "mda", "--max-weight", "5", "--certify", "--format", "csv"]);
    assert!(csv.lines().any(|r| r == "MDA,fil,5,2,9,exact"), "{csv}");
}

#[test]
fn dims_resource_cap() {
    let out = mdsum(&["dims", "--space", "md", "--max-weight", "15"], &[]);
    assert_eq!(out.status.code(), Some(4));
    let out = mdsum(&["relations", "--weight", "6", "--length", "3", "--max-cells", "10"], &[]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn dims_out_file_and_threads_do_not_change_bytes() {
    let dir = std::env::temp_dir().join(format!("mdsum-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("dims.csv");
    let p = path.to_str().unwrap();
    ok(&["dims", "--max-weight", "5", "--format", "csv", "--threads", "1", "--out", p]);
    let one = std::fs::read_to_string(&path).unwrap();
    let many = ok(&["dims", "--max-weight", "5", "--format", "csv", "--threads", "4"]);
    assert_eq!(one, many);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn mzv_json_round_trips() {
    let v = json(&["mzv", "2", "--mzv-error", "1e-15"]);
    let z = MzvValue::from_json(&v).unwrap();
    assert!(z.error_bound <= 1e-15);
    assert!((z.to_f64() - std::f64::consts::PI.powi(2) / 6.0).abs() < 1e-14);
    assert_eq!(z.to_json(), v);
    assert_eq!(mdsum(&["mzv", "1,2"], &[]).status.code(), Some(2));
}

#[test]
fn verification_suite_passes() {
    let out = mdsum(&["verify", "--suite", "paper"], &[]);
    let text = String::from_utf8_lossy(&out.stdout);
    assert_eq!(out.status.code(), Some(0), "{text}");
    assert_eq!(text.lines().filter(|l| l.starts_with("PASS")).count(), 10);
}
