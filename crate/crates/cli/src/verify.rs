//! The published identities, checked end to end.

use std::io::Write;
use std::time::Instant;

use mdsum::brackets::{bracket_series, partition_identity_check};
use mdsum::derivation::{d_general, d_len1, d_len2, derive, leibniz_relations, split_relations};
use mdsum::exactnum::{filtration_generators, rat, Rational};
use mdsum::linrel::{
    conjecture_series_check, dimension_report, fil_lower_bounds, homogeneous_relation_search,
    proven_relation_pool, ExactMatrix, Space,
};
use mdsum::modular::{quasi_modular_identity_checks, tau_congruence};
use mdsum::mzvlimit::{mzv, z_k_alg, z_k_symbolic};
use mdsum::quasishuffle::{evaluate, quasi_shuffle_words};
use mdsum::{Composition, WordSum};
use serde_json::json;

use crate::{Config, Failure, Format};

type Check = Result<String, String>;

fn c(s: &str) -> Composition {
    s.parse().expect("suite compositions are valid")
}

fn ws(s: &str) -> WordSum {
    WordSum::parse(s).expect("suite word sums are valid")
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn series_goldens() -> Check {
    let goldens: [(&str, i64, &[(usize, i64)]); 5] = [
        ("2", 1, &[(1, 1), (2, 3), (3, 4), (4, 7), (5, 6), (6, 12), (7, 8), (8, 15)]),
        ("4,2", 6, &[(3, 1), (4, 3), (5, 15), (6, 27), (7, 78), (8, 135)]),
        ("4,4,4", 216, &[(6, 1), (7, 9), (8, 45), (9, 190), (10, 642), (11, 1899)]),
        ("3,1,3,1", 4, &[(10, 1), (11, 2), (12, 8), (13, 16), (14, 43), (15, 70)]),
        ("1,2,3,4,5", 288, &[(15, 1), (16, 17), (17, 107), (18, 512), (19, 1985)]),
    ];
    for (w, den, terms) in goldens {
        let top = terms.last().map_or(0, |t| t.0);
        let s = bracket_series(&c(w), top);
        for n in 0..=top {
            let want = terms.iter().find(|t| t.0 == n).map_or(0, |t| t.1);
            ensure(s.coefficients()[n] == rat(want, den), || format!("[{w}] at q^{n}"))?;
        }
    }
    Ok("5 expansions".into())
}

fn products() -> Check {
    let cases = [
        ("1", "1", "2[1,1] + [2] - [1]"),
        ("1", "2", "[1,2] + [2,1] + [3] - 1/2[2]"),
        ("1", "2,1", "[1,2,1] + 2[2,1,1] - 3/2[2,1] + [2,2] + [3,1]"),
        ("4", "4", "2[4,4] + [8] + 1/360[4] - 1/1512[2]"),
    ];
    for (w, v, expect) in cases {
        let p = quasi_shuffle_words(&c(w), &c(v));
        ensure(p == ws(expect), || format!("[{w}]*[{v}] = {p}"))?;
    }
    let (w, v) = (c("2"), c("3,4"));
    let p = quasi_shuffle_words(&w, &v);
    ensure(
        evaluate(&p, 100) == bracket_series(&w, 100).mul(&bracket_series(&v, 100)),
        || "[2]*[3,4] series".into(),
    )?;
    Ok("5 products".into())
}

fn derivatives() -> Check {
    let cases = [
        (d_len1(1, 2), "[3] + 1/2[2] - [2,1]"),
        (d_len1(2, 2), "[4] + 2[3] - 1/6[2] - 4[3,1]"),
        (d_len1(1, 3), "2[4] + [3] + 1/6[2] - 2[2,2] - 2[3,1]"),
        (d_len2(1, 1), "[3,1] + 3/2[2,1] + 1/2[1,2] + [1,3] - 2[2,1,1] - [1,2,1]"),
        (d_len2(1, 2), "-1/6[1,2] + 2[1,3] + [1,4] + 3/2[2,2] + [3,2] - 4[1,3,1] - [2,1,2] - 2[2,2,1]"),
        (d_len2(2, 2), "-1/3[2,2] + 2[2,3] + [2,4] + 4[3,2] + [4,2] - 4[2,3,1] - 4[3,1,2] - 4[3,2,1]"),
        (
            d_general(&c("2,1,1")),
            "-1/6[2,1,1] + 1/2[2,1,2] - [2,1,2,1] + [2,1,3] + 3/2[2,2,1] - 2[2,2,1,1] + [2,3,1] + 6[3,1,1] - 8[3,1,1,1] + [4,1,1]",
        ),
    ];
    for (d, expect) in cases {
        let d = d.map_err(|e| e.to_string())?;
        ensure(d.expression == ws(expect), || format!("d{} = {}", d.source, d.expression))?;
    }
    Ok("7 expansions".into())
}

fn relations() -> Check {
    let split = split_relations(4).map_err(|e| e.to_string())?;
    let rel4 = ws("[4] - 2[2,2] + 2[3,1] - [3] + 1/3[2]");
    ensure(split.len() == 1 && split[0].equivalent_to(&rel4), || "weight-4 relation".into())?;
    let w5 = ws("[5] - 2[3,1,1] + [2,2,1] - [2,3] - 2[3,2] + [4,1] - 1/2[4] - 1/2[2,2] + 2[3,1] - 1/6[2,1] + 1/12[2] - 1/12[3]");
    let l = leibniz_relations(&c("1"), &c("2")).map_err(|e| e.to_string())?;
    ensure(l.equivalent_to(&w5), || "weight-5 relation".into())?;
    ensure(l.holds_to(200) && split[0].holds_to(200), || "relations at order 200".into())?;
    Ok("weight 4 and 5".into())
}

fn relation_counts() -> Check {
    let pool = proven_relation_pool(6, 3, 120).map_err(|e| e.to_string())?;
    let printed = [((4, 2), 1), ((5, 2), 1), ((5, 3), 1), ((6, 2), 2), ((6, 3), 3), ((4, 3), 0), ((3, 2), 0)];
    for ((k, l), n) in printed {
        let got = pool.graded_count(k, l);
        ensure(got == n, || format!("({k},{l}): {got} relations"))?;
    }
    Ok(format!("{} proven relations", pool.len()))
}

fn dimension_tables() -> Check {
    let mda: [&[u64]; 9] = [
        &[1],
        &[1, 1],
        &[1, 2, 2],
        &[1, 3, 4, 4],
        &[1, 4, 6, 7, 7],
        &[1, 5, 9, 12, 13, 13],
        &[1, 6, 12, 18],
        &[1, 7, 16],
        &[1, 8, 20],
    ];
    let md: [&[u64]; 7] = [
        &[1],
        &[1, 2],
        &[1, 3, 4],
        &[1, 4, 7, 8],
        &[1, 5, 10, 14, 15],
        &[1, 6, 14, 22, 27, 28],
        &[1, 7, 18, 32],
    ];
    for (space, k, rows) in [(Space::Mda, 8, &mda[..]), (Space::Md, 6, &md[..])] {
        let order = (2 * filtration_generators(k, k, space.admissible_only()).len()).max(200);
        let got = fil_lower_bounds(space, k, k, order);
        for (kk, row) in rows.iter().enumerate() {
            for (l, v) in row.iter().enumerate() {
                let g = got[&(kk as u32, l as u32)];
                ensure(g == *v, || format!("Fil_{{{kk},{l}}}({space}) = {g}"))?;
            }
        }
    }
    let gens = ["2", "3", "4", "2,1", "2,2", "3,1", "2,1,1"];
    let rows: Vec<Vec<Rational>> = gens.iter().map(|g| bracket_series(&c(g), 8).tail().to_vec()).collect();
    let rank = ExactMatrix::from_rows(rows).rank();
    ensure(rank == 6, || format!("7x8 matrix has rank {rank}"))?;
    Ok("MDA k <= 8, MD k <= 6, rank 6".into())
}

fn modular() -> Check {
    for order in [50, 100] {
        let r = quasi_modular_identity_checks(order).map_err(|e| e.to_string())?;
        if let Some(f) = r.checks.iter().find(|c| !c.pass) {
            return Err(format!("{} at order {order}", f.identity));
        }
    }
    ensure(tau_congruence(100).iter().all(|c| c.pass), || "tau congruence".into())?;
    Ok("Eisenstein identities, weight 8 and 12 relations, tau mod 691".into())
}

fn zeta_values(cfg: &Config) -> Check {
    let err = cfg.mzv_error.min(1e-12);
    let z = |s: &str| mzv(&c(s), err).map(|v| v.to_f64()).map_err(|e| e.to_string());
    let cases = [
        ("zeta(3) - zeta(2,1)", z("3")? - z("2,1")?),
        ("zeta(4) - 4 zeta(3,1)", z("4")? - 4.0 * z("3,1")?),
        ("zeta(4) - 4/3 zeta(2,2)", z("4")? - 4.0 / 3.0 * z("2,2")?),
        ("zeta(8) - 12 zeta(4,4)", z("8")? - 12.0 * z("4,4")?),
    ];
    for (name, v) in cases {
        ensure(v.abs() < 1e-8, || format!("{name} = {v:e}"))?;
    }
    let w12 = z_k_symbolic(&ws("5197/691[12] - 168[5,7] - 150[7,5] - 28[9,3]"), 12, err).map_err(|e| e.to_string())?;
    ensure(w12.to_f64().abs() < 1e-6, || format!("weight 12: {w12}"))?;
    let d11 = derive(&ws("[1,1]")).map_err(|e| e.to_string())?;
    let p = z_k_alg(&d11, 4, err).map_err(|e| e.to_string())?;
    ensure(p.max_abs() < 1e-6, || format!("Z_4^alg(d[1,1]) = {p}"))?;
    Ok("double zeta relations, weight 12, Z_4^alg(d[1,1])".into())
}

fn conjecture_data() -> Check {
    let order = 2 * filtration_generators(8, 8, true).len();
    let pool = proven_relation_pool(8, 3, 120).map_err(|e| e.to_string())?;
    let report = dimension_report(8, 8, 0, order, &pool.graded_counts(8));
    let sums = report.dprime_row_sums(8);
    let want = [1, 0, 1, 2, 3, 6, 10, 18, 32];
    ensure(sums.iter().zip(want).all(|(s, w)| *s == Some(w)), || format!("d'_k = {sums:?}"))?;
    ensure(
        conjecture_series_check(&sums).iter().all(|s| s.agrees == Some(true)),
        || "generating function".into(),
    )?;
    for k in [9, 10] {
        let n = homogeneous_relation_search(k, 3, true, 300).map_err(|e| e.to_string())?.len();
        ensure(n == 1, || format!("t{k} = {n}"))?;
    }
    Ok("d'_k for k <= 8, t9 = t10 = 1".into())
}

fn partitions() -> Check {
    ensure(partition_identity_check(50), || "p(n) for n <= 50".into())?;
    Ok("n <= 50".into())
}

pub fn published_suite(cfg: &Config) -> Result<String, Failure> {
    let suite: Vec<(&str, Box<dyn Fn() -> Check + '_>)> = vec![
        ("series", Box::new(series_goldens)),
        ("products", Box::new(products)),
        ("derivatives", Box::new(derivatives)),
        ("relations", Box::new(relations)),
        ("relation-counts", Box::new(relation_counts)),
        ("dimensions", Box::new(dimension_tables)),
        ("modular", Box::new(modular)),
        ("zeta-values", Box::new(move || zeta_values(cfg))),
        ("conjecture-data", Box::new(conjecture_data)),
        ("partitions", Box::new(partitions)),
    ];
    let mut first_failure = None;
    let mut records = Vec::new();
    let stdout = std::io::stdout();
    for (name, check) in suite {
        let t = Instant::now();
        let outcome = check();
        let secs = t.elapsed().as_secs_f64();
        let (pass, detail) = match outcome {
            Ok(d) => (true, d),
            Err(d) => (false, d),
        };
        if !pass && first_failure.is_none() {
            first_failure = Some(format!("{name}: {detail}"));
        }
        if cfg.format == Format::Text {
            let mut h = stdout.lock();
            let _ = writeln!(h, "{} {name:<16} {secs:>7.2}s  {detail}", if pass { "PASS" } else { "FAIL" });
            let _ = h.flush();
        }
        records.push(json!({ "name": name, "pass": pass, "detail": detail }));
    }
    let out = match cfg.format {
        Format::Text => String::new(),
        Format::Json => format!("{}\n", serde_json::to_string_pretty(&records).expect("json values print")),
        Format::Csv => {
            let mut s = String::from("name,pass,detail\n");
            for r in &records {
                s.push_str(&format!("{},{},\"{}\"\n", r["name"].as_str().unwrap_or(""), r["pass"], r["detail"].as_str().unwrap_or("").replace('"', "'")));
            }
            s
        }
    };
    match first_failure {
        None => Ok(out),
        Some(f) => {
            print!("{out}");
            Err(Failure::Verification(format!("first failing check {f}")))
        }
    }
}
