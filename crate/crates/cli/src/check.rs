//! Formula counts against brute-force enumeration.

use std::collections::BTreeMap;
use std::fmt::Write;

use growthlab::engine::{Engine, Fiber, FiberModule, ModuleDescriptor};
use growthlab::groups::{max_subgroups, prime_powers_up_to, GroupDescriptor};
use growthlab::oracle::{finite_shadow, maximal_subgroup_indices, oracle_count_max_submodules, OracleBounds};
use growthlab::spec_file::Spec;
use growthlab::Error;
use num_bigint::BigUint;

use crate::{Failure, Outcome};

enum Verdict {
    Agree,
    Mismatch,
    Skipped(String),
}

fn skipped_or_fail(e: Error) -> Result<Verdict, Failure> {
    match e {
        Error::BoundExceeded { .. } | Error::Unsupported(_) => Ok(Verdict::Skipped(e.to_string())),
        other => Err(Failure::compute(other)),
    }
}

fn module_fiber(m: &ModuleDescriptor, p: u64) -> Result<Option<FiberModule>, Error> {
    match m.fiber_mod_p(p)? {
        Fiber::Matrices(f) => Ok(Some(f)),
        Fiber::InvariantFactors(f) => f.to_fiber_module(),
    }
}

pub fn run(engine: &Engine, spec: &Spec, max_n: u64) -> Result<Outcome, Failure> {
    let bounds = OracleBounds::default();
    let mut out = String::new();
    let (mut agreed, mut mismatched, mut skipped) = (0usize, 0usize, 0usize);
    // maximal subgroup indices of the shadow at each prime
    let mut shadows: BTreeMap<u64, Result<Option<Vec<u64>>, String>> = BTreeMap::new();
    for n in prime_powers_up_to(max_n) {
        let (p, _) = growthlab::arith::prime_power_decompose(n)
            .ok()
            .flatten()
            .map(|i| (i.p, i.k))
            .expect("listed indices are prime powers");
        let (formula, verdict, oracle) = match spec {
            Spec::Module(m) => {
                let formula = engine.count_max_submodules(m, n).map_err(Failure::compute)?;
                match module_fiber(m, p) {
                    Ok(Some(f)) => match oracle_count_max_submodules(&f, n, &bounds) {
                        Ok(o) => (formula.clone(), compare(&formula, &o), Some(o)),
                        Err(e) => (formula, skipped_or_fail(e)?, None),
                    },
                    Ok(None) => (formula, Verdict::Skipped("fiber has a free part".into()), None),
                    Err(e) => (formula, skipped_or_fail(e)?, None),
                }
            }
            Spec::Group(g) => {
                let formula = max_subgroups(engine, g, n).map_err(Failure::compute)?.value;
                let entry = match shadows.get(&p) {
                    Some(e) => e.clone(),
                    None => {
                        let e = shadow_indices(g, p, &bounds)?;
                        shadows.insert(p, e.clone());
                        e
                    }
                };
                match entry {
                    Ok(Some(idx)) => {
                        let o = BigUint::from(idx.iter().filter(|&&i| i == n).count());
                        (formula.clone(), compare(&formula, &o), Some(o))
                    }
                    Ok(None) => (formula, Verdict::Skipped("no finite shadow for this group shape".into()), None),
                    Err(reason) => (formula, Verdict::Skipped(reason), None),
                }
            }
        };
        let oracle = oracle.map_or_else(|| "-".to_string(), |o| o.to_string());
        let status = match &verdict {
            Verdict::Agree => {
                agreed += 1;
                "agree".to_string()
            }
            Verdict::Mismatch => {
                mismatched += 1;
                "MISMATCH".to_string()
            }
            Verdict::Skipped(why) => {
                skipped += 1;
                format!("skipped ({why})")
            }
        };
        writeln!(out, "n={n} formula={formula} oracle={oracle} {status}").expect("writing to a String");
    }
    writeln!(out, "checked {} agreed {agreed} mismatched {mismatched} skipped {skipped}", agreed + mismatched)
        .expect("writing to a String");
    let code = if mismatched > 0 || agreed == 0 { 4 } else { 0 };
    Ok(Outcome { stdout: out, code })
}

fn compare(formula: &BigUint, oracle: &BigUint) -> Verdict {
    if formula == oracle {
        Verdict::Agree
    } else {
        Verdict::Mismatch
    }
}

fn shadow_indices(g: &GroupDescriptor, p: u64, bounds: &OracleBounds) -> Result<Result<Option<Vec<u64>>, String>, Failure> {
    let shadow = match finite_shadow(g, p, bounds) {
        Ok(Some(s)) => s,
        Ok(None) => return Ok(Ok(None)),
        Err(e @ Error::BoundExceeded { .. }) => return Ok(Err(e.to_string())),
        Err(e) => return Err(Failure::compute(e)),
    };
    match maximal_subgroup_indices(&shadow, bounds) {
        Ok(idx) => Ok(Ok(Some(idx))),
        Err(e @ Error::BoundExceeded { .. }) => Ok(Err(e.to_string())),
        Err(e) => Err(Failure::compute(e)),
    }
}
