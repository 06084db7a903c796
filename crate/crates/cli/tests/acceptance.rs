//! Acceptance suite: one PASS/FAIL line per criterion, exact equality throughout.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qcluster::bounds::{self, Coprimality};
use qcluster::coeff::CoeffMonomial;
use qcluster::explore::{alternating_period, bfs_explore, positivity_scan};
use qcluster::{
    load_seed, parse_element, HSymbol, IntMatrix, QCoefficient, QuantumSeed, TorusContext,
    TorusElement,
};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn seed(name: &str) -> QuantumSeed {
    load_seed(root().join("seeds").join(name)).expect("bundled seed files are valid")
}

fn golden(name: &str) -> String {
    std::fs::read_to_string(root().join("seeds/golden").join(name))
        .expect("golden file present")
        .trim()
        .to_string()
}

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(start: Instant, limit: Duration) -> Result<(), String> {
    let elapsed = start.elapsed();
    check(elapsed < limit, || {
        format!("took {elapsed:?}, limit {limit:?}")
    })
}

fn g2_reproduction() -> Outcome {
    let start = Instant::now();
    let g2 = seed("g2.json");
    let ctx = g2.initial_context();
    let mut s = g2.clone();
    let mut produced = Vec::new();
    for t in 0..8 {
        s = s.mutate(t % 2).map_err(|e| e.to_string())?;
        produced.push(s.var(t % 2).clone());
    }
    for (offset, x) in produced.iter().take(6).enumerate() {
        let k = offset + 3;
        let expected =
            parse_element(&golden(&format!("g2_x{k}.txt")), ctx).map_err(|e| e.to_string())?;
        check(x.to_string() == expected.to_string(), || {
            format!("X{k}: computed {x}, expected {expected}")
        })?;
    }
    check(produced[5].to_string() == "X(0,-1) + X(1,-1)", || {
        format!("X8 = {}", produced[5])
    })?;
    check(&produced[6] == g2.var(0), || "X9 != X1".to_string())?;
    check(&produced[7] == g2.var(1), || "X10 != X2".to_string())?;
    let p = alternating_period(&g2, 0, 1, 16).map_err(|e| e.to_string())?;
    check(p.seed_period == Some(8), || {
        format!("seed period {:?}", p.seed_period)
    })?;
    within(start, Duration::from_secs(5))?;
    Ok("X3..X8 byte-equal, X9 = X1, X10 = X2, period 8".to_string())
}

/// Classical A2 at q = 1: `x_{t+1} x_{t-1} = x_t + 1` with `x1, x2` initial.
fn a2_oracle() -> Vec<BTreeMap<Vec<i64>, i64>> {
    let poly = |terms: &[([i64; 2], i64)]| terms.iter().map(|(e, c)| (e.to_vec(), *c)).collect();
    vec![
        poly(&[([1, 0], 1)]),
        poly(&[([0, 1], 1)]),
        poly(&[([-1, 0], 1), ([-1, 1], 1)]),
        poly(&[([0, -1], 1), ([-1, 0], 1), ([-1, -1], 1)]),
        poly(&[([1, -1], 1), ([0, -1], 1)]),
        poly(&[([1, 0], 1)]),
        poly(&[([0, 1], 1)]),
    ]
}

fn at_q_one(x: &TorusElement) -> Result<BTreeMap<Vec<i64>, i64>, String> {
    let mut out = BTreeMap::new();
    for (c, a) in x.terms() {
        let v = a.at_q_one();
        let n = match v.terms().next() {
            None => 0,
            Some((m, n)) if v.len() == 1 && m.hdeg().is_empty() => {
                i64::try_from(n.clone()).map_err(|_| "coefficient overflow".to_string())?
            }
            _ => return Err(format!("non-integer coefficient {v}")),
        };
        if n != 0 {
            out.insert(c.clone(), n);
        }
    }
    Ok(out)
}

fn a2_sanity() -> Outcome {
    let start = Instant::now();
    let a2 = seed("a2.json");
    let p = alternating_period(&a2, 0, 1, 20).map_err(|e| e.to_string())?;
    check(p.variable_period == Some(5), || {
        format!("variable period {:?}", p.variable_period)
    })?;
    check(p.seed_period == Some(10), || {
        format!("seed period {:?}", p.seed_period)
    })?;
    for (t, (x, expected)) in p.variables.iter().zip(a2_oracle()).enumerate() {
        let got = at_q_one(x)?;
        check(got == expected, || {
            format!("x{} at q=1: {got:?} vs {expected:?}", t + 1)
        })?;
    }
    within(start, Duration::from_secs(1))?;
    Ok("5-periodic, q=1 specializations match x3..x7".to_string())
}

fn laurent_check() -> Outcome {
    let start = Instant::now();
    let mut details = Vec::new();
    for name in ["g2.json", "a2.json", "b2_frozen.json"] {
        let path = root().join("seeds").join(name);
        let (code, out) = qcluster_cli::run([
            "qcluster",
            "laurent-check",
            path.to_str().unwrap(),
            "--depth",
            "6",
        ]);
        check(code == 0, || format!("{name}: exit {code}: {out}"))?;
        check(out.contains("all divisions exact"), || {
            format!("{name}: {out}")
        })?;
        let seeds = out
            .lines()
            .find_map(|l| l.strip_prefix("distinct seeds = "))
            .unwrap_or("?")
            .to_string();
        details.push(format!("{name} {seeds} seeds"));
    }
    within(start, Duration::from_secs(30))?;
    Ok(details.join(", "))
}

fn visited(name: &str) -> Result<Vec<QuantumSeed>, String> {
    let report = bfs_explore(&seed(name), 6);
    if let Some(v) = report.violations.first() {
        return Err(format!("{name}: {}", v.error));
    }
    Ok(report.seeds.into_iter().map(|v| v.seed).collect())
}

fn structural_invariants() -> Outcome {
    let mut count = 0;
    for name in ["g2.json", "a2.json", "b2_frozen.json"] {
        for s in visited(name)? {
            count += 1;
            let findings = s.check_invariants();
            check(findings.is_empty(), || format!("{name}: {findings:?}"))?;
            for i in 0..s.n() {
                let plus = s.pair().mutate_with_sign(i, 1).map_err(|e| e.to_string())?;
                let minus = s
                    .pair()
                    .mutate_with_sign(i, -1)
                    .map_err(|e| e.to_string())?;
                check(plus == minus, || {
                    format!("{name}: sign dependence in direction {}", i + 1)
                })?;
            }
        }
    }
    Ok(format!("{count} seeds checked"))
}

fn factorizations() -> Outcome {
    let mut count = 0;
    for name in ["g2.json", "a2.json", "b2_frozen.json"] {
        for s in visited(name)? {
            for i in 0..s.n() {
                for p in 1..=4 {
                    let c =
                        bounds::power_factorization_check(&s, i, p).map_err(|e| e.to_string())?;
                    check(c.holds(), || {
                        format!("{name} {:?}: i = {}, s = {p}: {c:?}", s.history(), i + 1)
                    })?;
                    count += 2;
                }
            }
        }
    }
    Ok(format!("{count} identities"))
}

fn upper_bounds() -> Outcome {
    let mut checked = 0;
    for name in ["g2.json", "a2.json", "b2_frozen.json"] {
        let s = seed(name);
        let ctx = s.initial_context();
        for sample in bounds::invariance_samples(&s).map_err(|e| e.to_string())? {
            let expect = !sample.label.starts_with("X(") || frozen_label(&sample.label, s.n());
            let got = bounds::ub_member(&s, &sample.element);
            check(got == expect, || {
                format!("{name}: {} gives {got}", sample.label)
            })?;
            checked += 1;
        }
        for i in 0..s.n() {
            let mut e = vec![0; s.m()];
            e[i] = -1;
            check(!bounds::ub_member(&s, &TorusElement::basis(ctx, e)), || {
                format!("{name}: X(-e_{}) accepted", i + 1)
            })?;
        }
    }
    for name in ["g2.json", "a2.json"] {
        let s = seed(name);
        check(
            bounds::coprime_check_rank2(&s) == Coprimality::Coprime,
            || format!("{name} not certified coprime"),
        )?;
        let samples = bounds::invariance_samples(&s).map_err(|e| e.to_string())?;
        let findings = bounds::invariance_check(&s, &samples).map_err(|e| e.to_string())?;
        if let Some(f) = findings.iter().find(|f| !f.consistent()) {
            return Err(format!("{name}: {f:?}"));
        }
        checked += findings.len();
    }
    Ok(format!("{checked} verdicts"))
}

/// Labels `X(...)` of frozen monomials are members; inverses of mutable variables are not.
fn frozen_label(label: &str, n: usize) -> bool {
    let inner = label.trim_start_matches("X(").trim_end_matches(')');
    let entries: Vec<i64> = inner.split(',').map(|x| x.parse().unwrap()).collect();
    entries.iter().position(|&x| x != 0).is_some_and(|k| k >= n)
}

fn positivity() -> Outcome {
    let report = positivity_scan(&seed("g2.json"), 8);
    check(report.violations.is_empty(), || {
        format!("{:?}", report.violations)
    })?;
    check(report.failures.is_empty(), || {
        format!("{:?}", report.failures)
    })?;
    Ok(format!(
        "{} variables nonnegative",
        report.variables_checked
    ))
}

fn random_coeff(rng: &mut ChaCha8Rng) -> QCoefficient {
    let mut c = QCoefficient::zero();
    for _ in 0..rng.gen_range(1..=3) {
        let n: i64 = rng.gen_range(-3..=3);
        let mut t = QCoefficient::from_term(
            CoeffMonomial::q_half(rng.gen_range(-4..=4)),
            BigInt::from(n),
        );
        for sym in [HSymbol::new(1, 1), HSymbol::new(1, 2)] {
            t = &t * &QCoefficient::symbol(sym).pow(rng.gen_range(0..=2));
        }
        c = &c + &t;
    }
    c
}

fn random_element(rng: &mut ChaCha8Rng, ctx: &std::sync::Arc<TorusContext>) -> TorusElement {
    let terms: Vec<(Vec<i64>, QCoefficient)> = (0..rng.gen_range(1..=3))
        .map(|_| {
            let e = (0..ctx.dim()).map(|_| rng.gen_range(-2..=2)).collect();
            (e, random_coeff(rng))
        })
        .collect();
    TorusElement::from_terms(ctx, terms).unwrap()
}

fn round_trips() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(20240417);
    let mut divisions = 0;
    for _ in 0..1000 {
        let a = random_coeff(&mut rng);
        let b = loop {
            let b = random_coeff(&mut rng);
            if !b.is_zero() {
                break b;
            }
        };
        let q = (&a * &b)
            .divide_exact(&b)
            .map_err(|e| format!("coefficient division: {e}"))?;
        check(q == a, || format!("({a})*({b}) / ({b}) gave {q}"))?;
        divisions += 1;
    }
    for _ in 0..1000 {
        let m = rng.gen_range(2..=3);
        let mut lambda = IntMatrix::zeros(m, m);
        for i in 0..m {
            for j in i + 1..m {
                let v = rng.gen_range(-2..=2);
                lambda[(i, j)] = v;
                lambda[(j, i)] = -v;
            }
        }
        let ctx = TorusContext::new(lambda).unwrap();
        let a = random_element(&mut rng, &ctx);
        let b = loop {
            let b = random_element(&mut rng, &ctx);
            if !b.is_zero() {
                break b;
            }
        };
        let right = (&a * &b)
            .right_divide_exact(&b)
            .map_err(|e| format!("right division: {e}"))?;
        check(right == a, || format!("right division of ({a})*({b})"))?;
        let left = (&b * &a)
            .left_divide_exact(&b)
            .map_err(|e| format!("left division: {e}"))?;
        check(left == a, || format!("left division of ({b})*({a})"))?;
        divisions += 2;
    }
    let ctx = seed("g2.json").initial_context().clone();
    let mut files = 0;
    for k in 3..=8 {
        let x = parse_element(&golden(&format!("g2_x{k}.txt")), &ctx).map_err(|e| e.to_string())?;
        for text in [x.to_string(), x.ordered_form()] {
            let back = parse_element(&text, &ctx).map_err(|e| e.to_string())?;
            check(back == x, || format!("g2_x{k}: {text} did not round-trip"))?;
        }
        files += 1;
    }
    Ok(format!("{divisions} exact divisions, {files} golden files"))
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("G2 reproduction", g2_reproduction),
        ("quantum A2 sanity", a2_sanity),
        ("constructive Laurent phenomenon", laurent_check),
        ("structural invariants", structural_invariants),
        ("power factorizations", factorizations),
        ("upper-bound membership", upper_bounds),
        ("positivity observation", positivity),
        ("round-trips", round_trips),
    ];
    let mut failed = 0;
    for (k, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = f();
        let ms = start.elapsed().as_secs_f64() * 1e3;
        match outcome {
            Ok(detail) => println!("PASS {} {name} ({ms:.0} ms): {detail}", k + 1),
            Err(reason) => {
                failed += 1;
                println!("FAIL {} {name} ({ms:.0} ms): {reason}", k + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
