use std::fmt::Write as _;

use log::info;
use mdsum::brackets::bracket_series;
use mdsum::derivation::d_general;
use mdsum::exactnum::{filtration_generators, format_rational};
use mdsum::linrel::{
    default_pool_order, dimension_report, fil_lower_bounds, gr_from_fil, proven_relation_pool,
    relation_search, Certainty, DimCell, DimensionTable, Kind, Space,
};
use mdsum::mzvlimit::mzv;
use mdsum::quasishuffle::{decompose_in_one, evaluate, quasi_shuffle_words};
use mdsum::{Composition, OnePolynomial, QSeries, WordSum};
use serde_json::json;

use crate::{Cli, Command, Config, Failure, Format, SpaceArg};

type Out = Result<String, Failure>;

pub fn run(cli: &Cli) -> Out {
    let cfg = &cli.config;
    if cfg.order == 0 {
        return Err(Failure::Usage("--order must be positive".into()));
    }
    match &cli.command {
        Command::Series { parts } => series(cfg, parts),
        Command::Product { left, right } => product(cfg, left, right),
        Command::Derive { parts } => derive(cfg, parts),
        Command::Decompose { parts } => decompose(cfg, parts),
        Command::Dims { space, max_weight, max_length, certify, out, max_cells } => {
            let text = dims(cfg, *space, *max_weight, max_length.unwrap_or(*max_weight), *certify, *max_cells)?;
            match out {
                None => Ok(text),
                Some(path) => {
                    std::fs::write(path, &text)
                        .map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display())))?;
                    Ok(format!("wrote {}\n", path.display()))
                }
            }
        }
        Command::Relations { weight, length, space, max_cells } => {
            relations(cfg, *space, *weight, *length, *max_cells)
        }
        Command::Verify { .. } => crate::verify::published_suite(cfg),
        Command::Mzv { parts } => zeta(cfg, parts),
    }
}

fn pretty(v: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values print");
    s.push('\n');
    s
}

fn series_check(lhs: &QSeries, rhs: &QSeries, what: &str) -> Result<(), Failure> {
    match lhs.first_difference(rhs) {
        None => Ok(()),
        Some(n) => Err(Failure::Verification(format!("{what} differs at q^{n}"))),
    }
}

fn word_sum_csv(w: &WordSum) -> String {
    let mut out = String::from("composition,coefficient\n");
    for (c, r) in w.iter() {
        let _ = writeln!(out, "\"{}\",{}", c.to_arg(), format_rational(r));
    }
    out
}

fn checked(cfg: &Config, key: &str, value: serde_json::Value, text: String, csv: String) -> String {
    match cfg.format {
        Format::Json => pretty(&json!({ key: value, "check": { "order": cfg.order, "pass": true } })),
        Format::Csv => csv,
        Format::Text => format!("{text}\ncheck: series agree through q^{}\n", cfg.order),
    }
}

fn series(cfg: &Config, c: &Composition) -> Out {
    let s = bracket_series(c, cfg.order);
    Ok(match cfg.format {
        Format::Json => pretty(&json!({ "index": c.parts(), "series": s.to_json() })),
        Format::Csv => {
            let mut out = String::from("n,coefficient\n");
            for (n, r) in s.coefficients().iter().enumerate() {
                let _ = writeln!(out, "{n},{}", format_rational(r));
            }
            out
        }
        Format::Text => format!("{s}\n"),
    })
}

fn product(cfg: &Config, w: &Composition, v: &Composition) -> Out {
    let p = quasi_shuffle_words(w, v);
    let expect = bracket_series(w, cfg.order).mul(&bracket_series(v, cfg.order));
    series_check(&evaluate(&p, cfg.order), &expect, &format!("{w}*{v}"))?;
    Ok(checked(cfg, "product", p.to_json(), format!("{w}*{v} = {p}"), word_sum_csv(&p)))
}

fn derive(cfg: &Config, c: &Composition) -> Out {
    let d = d_general(c)?;
    let expect = bracket_series(c, cfg.order).q_d_dq();
    series_check(&evaluate(&d.expression, cfg.order), &expect, &format!("d{c}"))?;
    let e = &d.expression;
    Ok(checked(cfg, "derivative", e.to_json(), format!("d{c} = {e}"), word_sum_csv(e)))
}

fn decompose(cfg: &Config, c: &Composition) -> Out {
    let p: OnePolynomial = decompose_in_one(&WordSum::word(c.clone()));
    series_check(&p.evaluate(cfg.order), &bracket_series(c, cfg.order), &format!("decomposition of {c}"))?;
    let mut csv = String::from("power,composition,coefficient\n");
    for (j, w) in p.powers().iter().enumerate() {
        for (c, r) in w.iter() {
            let _ = writeln!(csv, "{j},\"{}\",{}", c.to_arg(), format_rational(r));
        }
    }
    Ok(checked(cfg, "polynomial", p.to_json(), format!("{c} = {p}"), csv))
}

fn cap(space: Space, k: u32, l: u32, cfg: &Config, max_cells: u64) -> Result<usize, Failure> {
    let gens = filtration_generators(k, l, space.admissible_only()).len();
    let order = cfg.order.max(2 * gens);
    if order > cfg.order {
        info!("raising the order to {order} for {} generators", gens);
    }
    let cells = (gens as u64).saturating_mul(order as u64);
    if cells > max_cells {
        return Err(Failure::Resource(format!(
            "{space} up to weight {k}, length {l}: {gens} generators at order {order} is {cells} cells (cap {max_cells})"
        )));
    }
    Ok(order)
}

fn lower_bound_tables(space: Space, k: u32, l: u32, order: usize) -> [DimensionTable; 2] {
    let fil = fil_lower_bounds(space, k, l, order);
    let mut f = DimensionTable::new(space, Kind::Fil);
    let mut g = DimensionTable::new(space, Kind::Gr);
    for (&(kk, ll), &v) in &fil {
        f.cells.insert((kk, ll), DimCell::new(v, Certainty::LowerBound));
        if let Some(x) = gr_from_fil(&fil, kk, ll) {
            g.cells.insert((kk, ll), DimCell::new(x.max(0) as u64, Certainty::Conjectural));
        }
    }
    [f, g]
}

fn dims(cfg: &Config, space: SpaceArg, k: u32, l: u32, certify: bool, max_cells: u64) -> Out {
    if l > k {
        return Err(Failure::Usage(format!("--max-length {l} exceeds --max-weight {k}")));
    }
    let spaces = space.spaces();
    let mut order = 0;
    for &s in &spaces {
        order = order.max(cap(s, k, l, cfg, max_cells)?);
    }
    let tables: Vec<DimensionTable> = if certify {
        let pool = proven_relation_pool(k, l.min(3), default_pool_order().max(cfg.order))?;
        let md_k = if spaces.contains(&Space::Md) { k } else { 0 };
        let report = dimension_report(k, l, md_k, order, &pool.graded_counts(k));
        report
            .tables()
            .into_iter()
            .filter(|t| spaces.contains(&t.space))
            .cloned()
            .collect()
    } else {
        spaces.iter().flat_map(|&s| lower_bound_tables(s, k, l, order)).collect()
    };
    Ok(render_tables(cfg.format, &tables))
}

fn render_tables(format: Format, tables: &[DimensionTable]) -> String {
    match format {
        Format::Csv => {
            let mut out = format!("{}\n", DimensionTable::CSV_HEADER);
            for t in tables {
                for row in t.csv_rows() {
                    out.push_str(&row);
                    out.push('\n');
                }
            }
            out
        }
        Format::Json => {
            let rows: Vec<serde_json::Value> = tables
                .iter()
                .flat_map(|t| {
                    t.cells.iter().map(move |(&(k, l), c)| {
                        json!({
                            "space": t.space.to_string(),
                            "kind": t.kind.to_string(),
                            "k": k,
                            "l": l,
                            "value": c.value,
                            "certainty": c.certainty.to_string(),
                        })
                    })
                })
                .collect();
            pretty(&serde_json::Value::Array(rows))
        }
        Format::Text => {
            let mut out = String::new();
            for t in tables {
                out.push_str(&t.grid());
                out.push('\n');
            }
            out.push_str("* lower bound or conjectural\n");
            out
        }
    }
}

fn relations(cfg: &Config, space: SpaceArg, k: u32, l: u32, max_cells: u64) -> Out {
    let space = match space {
        SpaceArg::Md => Space::Md,
        SpaceArg::Mda => Space::Mda,
        SpaceArg::Both => return Err(Failure::Usage("relations need a single --space".into())),
    };
    let order = cap(space, k, l, cfg, max_cells)?;
    let rels = relation_search(space, k, l, order)?;
    Ok(match cfg.format {
        Format::Json => pretty(&serde_json::Value::Array(rels.iter().map(|r| r.to_json()).collect())),
        Format::Csv => {
            let mut out = String::from("relation,composition,coefficient\n");
            for (i, r) in rels.iter().enumerate() {
                for (c, x) in r.body().iter() {
                    let _ = writeln!(out, "{i},\"{}\",{}", c.to_arg(), format_rational(x));
                }
            }
            out
        }
        Format::Text => {
            let mut out = String::new();
            for r in &rels {
                let _ = writeln!(out, "{} = 0", r.body());
            }
            let _ = writeln!(out, "{} relation(s), checked through q^{order}", rels.len());
            out
        }
    })
}

fn zeta(cfg: &Config, c: &Composition) -> Out {
    if !(cfg.mzv_error > 0.0) {
        return Err(Failure::Usage("--mzv-error must be positive".into()));
    }
    let v = mzv(c, cfg.mzv_error)?;
    Ok(match cfg.format {
        Format::Json => pretty(&v.to_json()),
        Format::Csv => format!("index,value,error_bound\n\"{}\",{},{:e}\n", c.to_arg(), v.decimal(), v.error_bound),
        Format::Text => format!("{v}\n"),
    })
}
