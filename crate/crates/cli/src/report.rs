//! Rendering of tables and reports.

use std::fmt::Write;

use growthlab::engine::{Engine, ModuleDescriptor, Provenance};
use growthlab::groups::{
    asymptotic_leading, group_growth_type, growth_table_for, mdeg as group_mdeg, module_growth_rows,
    GroupDescriptor, GrowthRow,
};
use growthlab::spec_file::Spec;
use num_bigint::BigUint;
use serde_json::{json, Map, Value};

use crate::Failure;

pub const CSV_HEADER: &str = "n,p,k,count,mtriv,mnontriv,exact";

/// A big integer as a JSON number.
fn big(v: &BigUint) -> Value {
    serde_json::from_str(&v.to_string()).expect("decimal digits form a JSON number")
}

fn row_json(r: &GrowthRow) -> Value {
    json!({
        "n": r.n,
        "p": r.p,
        "k": r.k,
        "count": big(&r.count),
        "mtriv": big(&r.mtriv),
        "mnontriv": big(&r.mnontriv),
        "exact": r.exact,
    })
}

fn to_text(v: &Value) -> String {
    let mut s = serde_json::to_string(v).expect("JSON values serialize");
    s.push('\n');
    s
}

pub fn table(engine: &Engine, spec: &Spec, indices: &[u64], as_json: bool, seed: u64) -> Result<String, Failure> {
    let mut meta = Map::new();
    let (rows, exact) = match spec {
        Spec::Group(g) => {
            let rep = growth_table_for(engine, g, indices).map_err(Failure::compute)?;
            meta.insert("mdeg".into(), mdeg_json(rep.mdeg.value, rep.mdeg.provenance));
            if let Some((rho1, d)) = rep.asymptotic {
                meta.insert("asymptotic".into(), json!({"rho1": rho1, "d": d}));
            }
            if let Some(t) = rep.growth_type {
                meta.insert("growth_type".into(), json!(t.to_string()));
            }
            (rep.rows, rep.exact)
        }
        Spec::Module(m) => {
            let rows = module_growth_rows(engine, m, indices).map_err(Failure::compute)?;
            if matches!(m, ModuleDescriptor::Presented(_)) {
                let t = engine.growth_type_classify(m).map_err(Failure::compute)?;
                meta.insert("growth_type".into(), json!(t.to_string()));
            }
            let exact = rows.iter().all(|r| r.exact);
            (rows, exact)
        }
    };
    if as_json {
        let mut obj = Map::new();
        obj.insert("seed".into(), json!(seed));
        obj.insert("rows".into(), Value::Array(rows.iter().map(row_json).collect()));
        obj.extend(meta);
        obj.insert("exact".into(), json!(exact));
        return Ok(to_text(&Value::Object(obj)));
    }
    let mut out = String::with_capacity(32 * (rows.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in &rows {
        writeln!(out, "{},{},{},{},{},{},{}", r.n, r.p, r.k, r.count, r.mtriv, r.mnontriv, r.exact)
            .expect("writing to a String");
    }
    Ok(out)
}

fn mdeg_json(value: usize, provenance: Provenance) -> Value {
    json!({"value": value, "provenance": provenance.to_string()})
}

fn group(spec: &Spec, what: &str) -> Result<GroupDescriptor, Failure> {
    match spec {
        Spec::Group(g) => Ok(g.clone()),
        Spec::Module(_) => Err(Failure::new(3, format!("{what} applies to group specs only"))),
    }
}

pub fn mdeg(engine: &Engine, spec: &Spec) -> Result<String, Failure> {
    let g = group(spec, "mdeg")?;
    let m = group_mdeg(engine, &g).map_err(Failure::compute)?;
    let mut obj = Map::new();
    obj.insert("mdeg".into(), json!(m.value));
    obj.insert("provenance".into(), json!(m.provenance.to_string()));
    if m.provenance == Provenance::UpperBound {
        obj.insert("note".into(), json!("finite acting group: the true value is mdeg or mdeg - 1"));
    }
    if let GroupDescriptor::ZkByZ { module: ModuleDescriptor::MatrixAction(mm) } = &g {
        if mm.rank() > 0 {
            let (rho1, d) = asymptotic_leading(engine, &g).map_err(Failure::compute)?;
            obj.insert("rho1".into(), json!(rho1));
            obj.insert("d".into(), json!(d));
        }
    }
    Ok(to_text(&Value::Object(obj)))
}

pub fn asymptote(engine: &Engine, spec: &Spec) -> Result<String, Failure> {
    let g = group(spec, "asymptote")?;
    if !matches!(g, GroupDescriptor::ZkByZ { .. }) {
        return Err(Failure::new(3, "asymptote applies to zk_by_z specs only"));
    }
    let (rho1, d) = asymptotic_leading(engine, &g).map_err(Failure::compute)?;
    Ok(to_text(&json!({"rho1": rho1, "d": d})))
}

pub fn growth_type(engine: &Engine, spec: &Spec) -> Result<String, Failure> {
    let t = match spec {
        Spec::Module(m @ ModuleDescriptor::Presented(_)) => engine.growth_type_classify(m).map_err(Failure::compute)?,
        Spec::Module(_) => return Err(Failure::new(3, "growth-type needs a presented module")),
        Spec::Group(g) => match group_growth_type(engine, g).map_err(Failure::compute)? {
            Some(t) => t,
            None => return Err(Failure::new(3, "growth-type needs a group over a presented module")),
        },
    };
    Ok(to_text(&json!({"growth_type": t.to_string()})))
}
