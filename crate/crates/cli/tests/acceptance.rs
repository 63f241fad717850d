//! One pass/fail line per acceptance criterion. Every tolerance and time
//! budget is a named constant below.

use std::collections::BTreeMap;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use growthlab::arith::{legendre, primes_up_to};
use growthlab::engine::{chain_count, Engine, GrowthType, ModuleDescriptor};
use growthlab::groups::{
    asymptotic_leading, der_count, max_subgroups, mdeg, prime_powers_up_to, AbelianGroup, GroupDescriptor,
    SimpleModuleData,
};
use growthlab::linalg::{char_matrix, smith_normal_form_poly, IntMatrix, Matrix};
use growthlab::oracle::{
    maximal_subgroup_indices, oracle_count_max_submodules, oracle_der_count, oracle_is_simple, ActingModule,
    FiniteSemidirect, OracleBounds,
};
use growthlab::poly::{count_irreducibles, factor_mod_p, Fp, Poly, ZPoly};
use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SEED: u64 = 0xACCE_9715;

const BUDGET_1: Duration = Duration::from_secs(10);
const BUDGET_2: Duration = Duration::from_secs(5);
const BUDGET_3: Duration = Duration::from_secs(60);
const BUDGET_4: Duration = Duration::from_secs(30);
const BUDGET_5: Duration = Duration::from_secs(20);
const BUDGET_6: Duration = Duration::from_secs(20);
const BUDGET_7: Duration = Duration::from_secs(30);
const BUDGET_8: Duration = Duration::from_secs(10);
const BUDGET_9: Duration = Duration::from_secs(30);
const BUDGET_10: Duration = Duration::from_secs(30);
const BUDGET_11: Duration = Duration::from_secs(60);

/// Largest fitted constant accepted in the leading-term check.
const LEADING_C_MAX: f64 = 3.0;
/// Smallest number of primes with `m_n ≥ ρ₁ n^d` in the leading-term check.
const LEADING_MIN_HITS: usize = 10;

struct Outcome {
    ok: bool,
    detail: String,
}

fn pass(detail: impl Into<String>) -> Outcome {
    Outcome { ok: true, detail: detail.into() }
}

fn fail(detail: impl Into<String>) -> Outcome {
    Outcome { ok: false, detail: detail.into() }
}

fn engine() -> Engine {
    Engine::default()
}

fn zk(a: IntMatrix) -> GroupDescriptor {
    let module = ModuleDescriptor::matrix(a.rows(), vec![], vec![a], true).unwrap();
    GroupDescriptor::zk_by_z(module).unwrap()
}

fn big(n: u64) -> BigUint {
    BigUint::from(n)
}

fn wreath_golden_table() -> Outcome {
    let dir = tempfile::TempDir::new().unwrap();
    let path = dir.path().join("wreath.json");
    std::fs::write(&path, r#"{"type":"wreath_cyclic","m":3}"#).unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_growthlab"))
        .args(["table", path.to_str().unwrap(), "--max-n", "1000", "--max-k", "3"])
        .env_remove("GROWTHLAB_SEED")
        .output()
        .unwrap();
    if !out.status.success() {
        return fail(format!("table exited with {:?}", out.status.code()));
    }
    let text = String::from_utf8(out.stdout).unwrap();
    let mut got: BTreeMap<u64, BigUint> = BTreeMap::new();
    for line in text.lines().skip(1) {
        let cols: Vec<&str> = line.split(',').collect();
        got.insert(cols[0].parse().unwrap(), cols[3].parse().unwrap());
    }
    let mut expected: BTreeMap<u64, BigUint> = BTreeMap::new();
    for p in primes_up_to(1000) {
        let one = p % 3 == 1;
        let (m1, m2) = if p == 3 {
            (big(4), big(0))
        } else if one {
            (big(1 + 2 * p), big(0))
        } else {
            (big(1), big(p * p))
        };
        expected.insert(p, m1);
        expected.insert(p * p, m2);
        expected.insert(p * p * p, big(0));
    }
    if got != expected {
        let bad = expected.iter().find(|(n, v)| got.get(n) != Some(v));
        return fail(format!("first difference at {bad:?}"));
    }
    let g = GroupDescriptor::wreath_cyclic(3).unwrap();
    let composite = (2..=5000u64)
        .filter(|&n| growthlab::arith::prime_power_decompose(n).unwrap().is_none())
        .find(|&n| !max_subgroups(&engine(), &g, n).unwrap().value.is_zero());
    if let Some(n) = composite {
        return fail(format!("nonzero count at non-prime-power {n}"));
    }
    pass(format!("{} rows from the CLI equal the closed forms; non-prime-powers ≤ 5000 give 0", got.len()))
}

fn permutations(k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(k - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, k - 1);
            out.push(q);
        }
    }
    out
}

fn cycle_count(s: &[usize]) -> usize {
    let mut seen = vec![false; s.len()];
    let mut c = 0;
    for i in 0..s.len() {
        if !seen[i] {
            c += 1;
            let mut j = i;
            while !seen[j] {
                seen[j] = true;
                j = s[j];
            }
        }
    }
    c
}

fn permutation_matrix(s: &[usize]) -> IntMatrix {
    let mut a = IntMatrix::zeros(s.len(), s.len());
    for (j, &i) in s.iter().enumerate() {
        a.set(i, j, BigInt::one());
    }
    a
}

fn permutation_degree() -> Outcome {
    let mut total = 0;
    for k in 1..=5 {
        for s in permutations(k) {
            let got = mdeg(&engine(), &zk(permutation_matrix(&s))).unwrap().value;
            if got != cycle_count(&s) {
                return fail(format!("σ = {s:?}: mdeg {got}, cycles {}", cycle_count(&s)));
            }
            total += 1;
        }
    }
    pass(format!("{total} permutations, mdeg = cycle count"))
}

fn random_matrix(rng: &mut ChaCha8Rng, k: usize, lo: i64, hi: i64) -> IntMatrix {
    let rows: Vec<Vec<BigInt>> =
        (0..k).map(|_| (0..k).map(|_| BigInt::from(rng.gen_range(lo..=hi))).collect()).collect();
    IntMatrix::from_rows(&rows).unwrap()
}

/// `c0 + c1 A + c2 A²`, which commutes with `A`.
fn polynomial_in(rng: &mut ChaCha8Rng, a: &IntMatrix) -> IntMatrix {
    let k = a.rows();
    let mut out = IntMatrix::zeros(k, k);
    let mut pw = IntMatrix::identity(k);
    for _ in 0..3 {
        let c = BigInt::from(rng.gen_range(-1i64..=1));
        for i in 0..k {
            for j in 0..k {
                out.set(i, j, out.get(i, j) + &c * pw.get(i, j));
            }
        }
        pw = pw.mul(a).unwrap();
    }
    out
}

fn engine_vs_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 3);
    let bounds = OracleBounds::default();
    let mut comparisons = 0;
    for case in 0..200 {
        let k = rng.gen_range(1..=4);
        let a = random_matrix(&mut rng, k, -3, 3);
        let mut actions = vec![a.clone()];
        if rng.gen_bool(0.5) {
            actions.push(polynomial_in(&mut rng, &a));
        }
        let m = ModuleDescriptor::matrix(k, vec![], actions, false).unwrap();
        let ModuleDescriptor::MatrixAction(mm) = &m else { unreachable!() };
        for p in primes_up_to(81).into_iter().filter(|&p| p.pow(k as u32) <= 81) {
            let fiber = mm.fiber_mod_p(p).unwrap();
            for j in 1..=k as u32 {
                let n = p.pow(j);
                let ours = engine().count_max_submodules(&m, n).unwrap();
                let oracle = oracle_count_max_submodules(&fiber, n, &bounds).unwrap();
                if ours != oracle {
                    return fail(format!("case {case}, n={n}: engine {ours}, oracle {oracle}"));
                }
                comparisons += 1;
            }
        }
    }
    pass(format!("200 modules, {comparisons} exact comparisons"))
}

fn spectrum_vs_snf() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 4);
    let mut comparisons = 0;
    for case in 0..50 {
        let k = rng.gen_range(1..=4);
        let a = random_matrix(&mut rng, k, -5, 5);
        let m = ModuleDescriptor::matrix(k, vec![], vec![a.clone()], false).unwrap();
        for p in primes_up_to(23) {
            let field = Fp::new(p).unwrap();
            let snf = smith_normal_form_poly(&char_matrix(&a.reduce(field)).unwrap()).unwrap();
            let factors: Vec<Poly<Fp>> = snf.diagonal.into_iter().filter(|d| !d.is_constant()).collect();
            for j in 1..=4u32 {
                let n = p.pow(j);
                let spectral = engine().count_max_submodules(&m, n).unwrap();
                let chain = chain_count(&factors, 0, n, false).unwrap();
                if spectral != chain {
                    return fail(format!("case {case}, n={n}: spectrum {spectral}, chain {chain}"));
                }
                comparisons += 1;
            }
        }
    }
    pass(format!("50 matrices, {comparisons} exact comparisons"))
}

/// Whether a monic polynomial (low-to-high coefficients) has a monic
/// factor of degree between 1 and half its degree, by trial division.
fn has_small_factor(f: &[u64], p: u64) -> bool {
    let deg = f.len() - 1;
    for d in 1..=deg / 2 {
        let total = p.pow(d as u32);
        for idx in 0..total {
            let mut g: Vec<u64> = (0..d).map(|i| idx / p.pow(i as u32) % p).collect();
            g.push(1);
            let mut r = f.to_vec();
            while r.len() > d {
                let c = *r.last().unwrap();
                let shift = r.len() - 1 - d;
                for (i, &gi) in g.iter().enumerate() {
                    r[shift + i] = (r[shift + i] + p * p - c * gi % p) % p;
                }
                r.pop();
            }
            if r.iter().all(|&x| x == 0) {
                return true;
            }
        }
    }
    false
}

fn mobius_counts() -> Outcome {
    let mut checked = 0;
    for p in [2u64, 3, 5] {
        for k in 1..=4u32 {
            let mut count = 0u64;
            for idx in 0..p.pow(k) {
                let mut f: Vec<u64> = (0..k).map(|i| idx / p.pow(i) % p).collect();
                f.push(1);
                if !has_small_factor(&f, p) {
                    count += 1;
                }
            }
            let formula = count_irreducibles(p, k).unwrap();
            if formula != big(count) {
                return fail(format!("p={p}, k={k}: formula {formula}, enumeration {count}"));
            }
            checked += 1;
        }
    }
    pass(format!("{checked} (p, k) pairs equal exhaustive enumeration"))
}

fn companion(f: &[u64], field: Fp) -> Matrix<Fp> {
    let d = f.len() - 1;
    let mut c = Matrix::zeros(field, d, d);
    for j in 0..d {
        if j + 1 < d {
            c.set(j + 1, j, 1);
        }
        c.set(j, d - 1, (field.p() - f[j]) % field.p());
    }
    c
}

/// Companion matrix of a primitive polynomial of degree `e`, which
/// generates the unit group of `F_{p^e}`.
fn primitive_companion(p: u64, e: u32) -> Matrix<Fp> {
    let field = Fp::new(p).unwrap();
    let id = Matrix::identity(field, e as usize);
    let units = p.pow(e) - 1;
    for idx in 0..p.pow(e) {
        let mut f: Vec<u64> = (0..e).map(|i| idx / p.pow(i) % p).collect();
        f.push(1);
        if f[0] == 0 || has_small_factor(&f, p) {
            continue;
        }
        let c = companion(&f, field);
        let mut pw = c.clone();
        let mut order = 1;
        while pw != id {
            pw = pw.mul(&c).unwrap();
            order += 1;
        }
        if order == units {
            return c;
        }
    }
    unreachable!("primitive polynomials exist in every degree")
}

fn derivation_counts() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 6);
    let bounds = OracleBounds::default();
    let mut done = 0;
    let (mut trivial, mut attempts) = (0, 0);
    while done < 100 {
        attempts += 1;
        let p = [2u64, 3, 5][rng.gen_range(0..3)];
        let e = rng.gen_range(1..=2u32);
        let size = p.pow(e);
        let rank = rng.gen_range(0..=2usize);
        let torsion: Vec<u64> = (0..rng.gen_range(0..=2)).map(|_| [2u64, 3, 4, 6][rng.gen_range(0..4)]).collect();
        let gens = rank + torsion.len();
        if gens == 0 || (size as u128).pow(gens as u32) > bounds.max_maps as u128 {
            continue;
        }
        let field = Fp::new(p).unwrap();
        let c = primitive_companion(p, e);
        let unit_order = size - 1;
        let make_trivial = rng.gen_bool(0.3);
        let mut actions = Vec::new();
        let mut orders = Vec::new();
        for g in 0..gens {
            let exp = if make_trivial {
                0
            } else if g < rank {
                rng.gen_range(0..unit_order)
            } else {
                let t = torsion[g - rank];
                let step = unit_order / num_integer::gcd(unit_order, t);
                step * rng.gen_range(0..unit_order / step)
            };
            actions.push(c.pow(exp).unwrap());
            orders.push(if g < rank { None } else { Some(torsion[g - rank]) });
        }
        let s = ActingModule { p, actions, orders };
        if !oracle_is_simple(&s, &bounds).unwrap() {
            continue;
        }
        let id = Matrix::identity(field, e as usize);
        let is_trivial = s.actions.iter().all(|a| *a == id);
        trivial += usize::from(is_trivial);
        let acting = AbelianGroup { rank, torsion };
        let closed = der_count(&acting, &SimpleModuleData { size: big(size), trivial: is_trivial }).unwrap();
        let oracle = oracle_der_count(&s, &bounds).unwrap();
        if closed != oracle {
            return fail(format!("instance {done}: p={p} e={e} rank={} torsion={:?} trivial={is_trivial} exps={:?}: closed form {closed}, oracle {oracle}", acting.rank, acting.torsion, s.orders));
        }
        done += 1;
    }
    pass(format!("100 simple modules ({trivial} trivial, {attempts} drawn) agree exactly"))
}

fn leading_term() -> Outcome {
    let cases = [
        ("3-cycle", IntMatrix::from_i64(&[&[0, 1, 0], &[0, 0, 1], &[1, 0, 0]])),
        ("companion(x^2+1)", IntMatrix::from_i64(&[&[0, -1], &[1, 0]])),
        ("companion(x^3-1)", IntMatrix::from_i64(&[&[0, 0, 1], &[1, 0, 0], &[0, 1, 0]])),
    ];
    let ns = prime_powers_up_to(2000);
    let mut details = Vec::new();
    for (name, a) in cases {
        let g = zk(a);
        let (rho, d) = asymptotic_leading(&engine(), &g).unwrap();
        let mut c_fit = f64::NEG_INFINITY;
        let mut hits = 0;
        for &n in &ns {
            let m = max_subgroups(&engine(), &g, n).unwrap().value.to_f64().unwrap();
            let nf = n as f64;
            let lead = rho as f64 * nf.powi(d as i32);
            c_fit = c_fit.max((m - lead) / nf.powi(d as i32 - 1));
            if growthlab::arith::is_prime(n) && m >= lead {
                hits += 1;
            }
        }
        if c_fit > LEADING_C_MAX || hits < LEADING_MIN_HITS {
            return fail(format!("{name}: (ρ₁, d) = ({rho}, {d}), C = {c_fit}, hits = {hits}"));
        }
        details.push(format!("{name}: ρ₁={rho} d={d} C={c_fit} hits={hits}"));
    }
    pass(format!("{} (C ≤ {LEADING_C_MAX}, hits ≥ {LEADING_MIN_HITS})", details.join("; ")))
}

fn quadratic_reciprocity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 8);
    let mut checked = 0;
    for p in primes_up_to(5000).into_iter().filter(|&p| p > 3) {
        let field = Fp::new(p).unwrap();
        let f = Poly::from_i64s(field, &[1, 1, 1]);
        let reducible = !factor_mod_p(&f, &mut rng).unwrap().is_irreducible();
        let one_mod_3 = p % 3 == 1;
        let residue = legendre(-3, p).unwrap() == 1;
        if reducible != one_mod_3 || one_mod_3 != residue {
            return fail(format!("p={p}: reducible {reducible}, p ≡ 1 mod 3 {one_mod_3}, (−3/p) = 1 {residue}"));
        }
        checked += 1;
    }
    // at p = 3 the polynomial is (x − 1)² and (−3/3) = 0, so the equivalence is stated for p ≠ 3
    let f3 = Poly::from_i64s(Fp::new(3).unwrap(), &[1, 1, 1]);
    let fact = factor_mod_p(&f3, &mut rng).unwrap();
    if fact.is_irreducible() || legendre(-3, 3).unwrap() != 0 {
        return fail("p=3: expected x^2+x+1 = (x-1)^2 and (−3/3) = 0");
    }
    pass(format!("{checked} primes 3 < p ≤ 5000 agree; p = 3 gives (x-1)^2 and symbol 0"))
}

fn growth_trichotomy() -> Outcome {
    let presented = |rels: Vec<Vec<ZPoly>>, gens| ModuleDescriptor::presented(gens, rels).unwrap();
    let cases = [
        ("Z[x]", presented(vec![], 1), GrowthType::PolyDegree(1)),
        ("Z[x]/(5)", presented(vec![vec![ZPoly::from_i64s(&[5])]], 1), GrowthType::SubPoly(1)),
        ("Z[x]/(x^2+1)", presented(vec![vec![ZPoly::from_i64s(&[1, 0, 1])]], 1), GrowthType::PolyDegree(0)),
        ("Z[x]^2", presented(vec![], 2), GrowthType::PolyDegree(2)),
    ];
    for (name, m, want) in &cases {
        let got = engine().growth_type_classify(m).unwrap();
        if got != *want {
            return fail(format!("{name}: {got}, expected {want}"));
        }
    }
    let free2 = &cases[3].1;
    for p in primes_up_to(100) {
        let got = engine().count_max_submodules(free2, p).unwrap();
        if got != big(p * p + p) {
            return fail(format!("Z[x]^2 at p={p}: {got}, expected {}", p * p + p));
        }
    }
    pass("Z[x] → n^1, Z[x]/(5) → n^1/log(n), Z[x]/(x^2+1) → n^0, Z[x]^2 → n^2 (m_p = p^2 + p for p ≤ 100)")
}

fn nilpotent_family() -> Outcome {
    let mut f = BTreeMap::new();
    f.insert((1, 2), vec![BigInt::one()]);
    let h = GroupDescriptor::nilpotent(2, f).unwrap();
    for p in primes_up_to(100) {
        let got = max_subgroups(&engine(), &h, p).unwrap().value;
        if got != big(p + 1) {
            return fail(format!("Heisenberg at p={p}: {got}"));
        }
    }
    let hd = mdeg(&engine(), &h).unwrap().value;
    if hd != 1 {
        return fail(format!("Heisenberg mdeg {hd}"));
    }
    for ell in [2usize, 3] {
        let k = ell * (ell - 1) / 2;
        let g = GroupDescriptor::nilpotent(ell, BTreeMap::new()).unwrap();
        let d = mdeg(&engine(), &g).unwrap().value;
        if d != ell + k - 1 {
            return fail(format!("trivial f, ℓ={ell}: mdeg {d}"));
        }
        for p in primes_up_to(100) {
            let want = (BigUint::from(p).pow((ell + k) as u32) - 1u32) / (p - 1);
            let got = max_subgroups(&engine(), &g, p).unwrap().value;
            if got != want {
                return fail(format!("trivial f, ℓ={ell}, p={p}: {got}, expected {want}"));
            }
        }
    }
    pass("Heisenberg m_p = p + 1 (p ≤ 100), mdeg 1; trivial f mdeg ℓ + C(ℓ,2) − 1 and repunit counts for ℓ ∈ {2, 3}")
}

fn finite_shadow() -> Outcome {
    let bounds = OracleBounds::default();
    let mut details = Vec::new();
    for p in [2u64, 5, 7] {
        let g = FiniteSemidirect { m: p, q: 3, action: vec![vec![0, 0, 1], vec![1, 0, 0], vec![0, 1, 0]] };
        let order = g.order().unwrap() as u64;
        let indices = maximal_subgroup_indices(&g, &bounds).unwrap();
        let formula = GroupDescriptor::from_finite(&g).unwrap();
        for n in 2..=order {
            let oracle = big(indices.iter().filter(|&&i| i == n).count() as u64);
            let ours = max_subgroups(&engine(), &formula, n).unwrap().value;
            if oracle != ours {
                return fail(format!("p={p}, n={n}: oracle {oracle}, formula {ours}"));
            }
        }
        details.push(format!("p={p}: {} maximal subgroups", indices.len()));
    }
    pass(format!("all indices agree ({})", details.join(", ")))
}

fn main() -> ExitCode {
    type Criterion = (&'static str, fn() -> Outcome, Duration);
    let criteria: [Criterion; 11] = [
        ("wreath golden table", wreath_golden_table, BUDGET_1),
        ("permutation degree", permutation_degree, BUDGET_2),
        ("engine-oracle equivalence", engine_vs_oracle, BUDGET_3),
        ("one-variable cross-check", spectrum_vs_snf, BUDGET_4),
        ("Möbius counts", mobius_counts, BUDGET_5),
        ("derivation counts", derivation_counts, BUDGET_6),
        ("leading-term property", leading_term, BUDGET_7),
        ("quadratic reciprocity regression", quadratic_reciprocity, BUDGET_8),
        ("growth-type trichotomy", growth_trichotomy, BUDGET_9),
        ("nilpotent family", nilpotent_family, BUDGET_10),
        ("finite-shadow end-to-end", finite_shadow, BUDGET_11),
    ];
    let mut failures = 0;
    for (i, (name, run, budget)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let took = start.elapsed();
        let in_time = took <= *budget;
        let ok = outcome.ok && in_time;
        failures += usize::from(!ok);
        println!(
            "{} criterion {:>2} {name}: {} [{:.2} s of {} s]",
            if ok { "PASS" } else { "FAIL" },
            i + 1,
            outcome.detail,
            took.as_secs_f64(),
            budget.as_secs()
        );
    }
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
