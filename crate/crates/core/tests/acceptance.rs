//! Acceptance criteria, one line each. Runs as a plain binary so the
//! report is always printed; exits nonzero if any criterion fails.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use picentral::builders::build_w;
use picentral::grassmann::{find_witness, WitnessMode};
use picentral::spans::Verdict as SpanVerdict;
use picentral::verifier::{
    bss_consistency, frobenius_instances, s2_spss_support, xp_w_instances, ClaimKind, CLAIMS,
};
use picentral::{
    parse_poly, reduce_poly, Budget, Field, GrassmannAlgebra, Mode, Params, Polynomial, SpanEngine, SpanSpec,
    Verdict, Verifier, Word,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, Duration, fn() -> Outcome);

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn pass_all(p: u32, keys: &[&str], m: Option<u32>) -> Result<(), String> {
    let mut v = Verifier::new(Params::new(p)).map_err(|e| e.to_string())?;
    for key in keys {
        let cert = v.verify(key, m).map_err(|e| e.to_string())?;
        ensure(cert.verdict == Verdict::Pass, format!("{key} at p={p}: {}", cert.verdict.as_str()))?;
    }
    Ok(())
}

fn commutator_identities() -> Outcome {
    let handy = ["L-handy-i", "L-handy-ii", "L-handy-iii", "L-handy-iv", "L-handy-v", "L-handy-vi"];
    let mut p3: Vec<&str> = handy.to_vec();
    p3.extend(["L-handy-vii", "L-alt-desc", "L-kappa-add", "L-kappa-mult"]);
    pass_all(3, &p3, None)?;
    let mut p5 = handy.to_vec();
    p5.push("L-alt-desc");
    pass_all(5, &p5, None)?;
    Ok(format!("{} claims at p=3, {} at p=5", p3.len(), p5.len()))
}

fn w1_outside_s2_tg0() -> Outcome {
    let f = Field::new(3).unwrap();
    let mut engine = SpanEngine::new(f, Budget::default());
    let w1 = build_w(f, Mode::Nonunital, 1, None).map_err(|e| e.to_string())?;
    let res = engine.member_poly(&w1, &SpanSpec::parse("S2+TG0", f).unwrap()).map_err(|e| e.to_string())?;
    ensure(res.verdict() == SpanVerdict::NotMember, "w_1 not decided as non-member")?;
    let span = &res.parts[0].span;
    ensure(span.is_exact(), "span inconclusive")?;
    ensure(span.words().len() == 20 && span.dimension() == 19, format!("words {} dim {}", span.words().len(), span.dimension()))?;
    Ok("not a member; 20 words, dimension 19, exact".into())
}

fn s2_on_spss() -> Outcome {
    let mut total = 0;
    for p in [3, 5] {
        let (checked, bad, first) = s2_spss_support(Field::new(p).unwrap(), &[1, 2, 3, 4], 6).map_err(|e| e.to_string())?;
        ensure(bad == 0, format!("p={p}: {bad} violations, first {first:?}"))?;
        total += checked;
    }
    Ok(format!("{total} commutators over 4 variables up to degree 6, none off SPSS"))
}

fn bss_evaluation() -> Outcome {
    let mut total = 0;
    for p in [3, 5] {
        let (n, bad) = bss_consistency(Field::new(p).unwrap(), 8, 500, 50, 0).map_err(|e| e.to_string())?;
        ensure(bad.is_none(), format!("p={p}: mismatch {bad:?}"))?;
        total += n;
    }
    Ok(format!("{total} evaluations of f and its normal form agree in G0(8)"))
}

fn random_monomial(f: Field, r: &mut ChaCha8Rng, vars: &[u32], max_len: usize) -> Polynomial {
    let len = r.gen_range(1..=max_len);
    let w = (0..len).map(|_| vars[r.gen_range(0..vars.len())]).collect();
    Polynomial::monomial(f, Mode::Nonunital, Word::new(w), 1).unwrap()
}

fn random_context(f: Field, r: &mut ChaCha8Rng) -> Polynomial {
    let len = r.gen_range(0..=2);
    let w = (0..len).map(|_| r.gen_range(1..=4)).collect();
    Polynomial::from_terms(f, Mode::Unital, [(Word::new(w), 1)]).unwrap()
}

fn identities_reduce_to_zero() -> Outcome {
    for p in [3, 5] {
        let f = Field::new(p).unwrap();
        let mut r = ChaCha8Rng::seed_from_u64(p as u64);
        let t3 = parse_poly("[[x1,x2],x3]", f, Mode::Nonunital).unwrap();
        for i in 0..200 {
            let images: BTreeMap<u32, Polynomial> = (1..=3)
                .map(|v| {
                    let a = random_monomial(f, &mut r, &[1, 2, 3, 4], 2);
                    let b = random_monomial(f, &mut r, &[1, 2, 3, 4], 2);
                    (v, &a + &b.scale(r.gen_range(0..p)))
                })
                .collect();
            let s = t3.substitute(&images).unwrap();
            let s = s.with_mode(Mode::Unital).unwrap();
            let g = (&(&random_context(f, &mut r) * &s) * &random_context(f, &mut r)).with_mode(Mode::Nonunital).unwrap();
            ensure(reduce_poly(&g).unwrap().is_zero(), format!("p={p} T3 instance {i}: {g}"))?;
        }
        for i in 0..200 {
            let u = &random_monomial(f, &mut r, &[1, 2, 3], 2) + &random_monomial(f, &mut r, &[1, 2, 3], 1).scale(r.gen_range(0..p));
            let g = (&(&random_context(f, &mut r) * &u.pow(p).unwrap().with_mode(Mode::Unital).unwrap()) * &random_context(f, &mut r))
                .with_mode(Mode::Nonunital)
                .unwrap();
            ensure(reduce_poly(&g).unwrap().is_zero(), format!("p={p} x^p instance {i}: {g}"))?;
        }
    }
    Ok("200 + 200 instances at p=3 and p=5 have normal form 0".into())
}

fn chain() -> Outcome {
    let mut v = Verifier::new(Params::new(3)).map_err(|e| e.to_string())?;
    let mut seps = Vec::new();
    for m in [0, 1] {
        let cert = v.verify("chain-strict", Some(m)).map_err(|e| e.to_string())?;
        ensure(cert.verdict == Verdict::Pass, format!("m={m}: {}", cert.verdict.as_str()))?;
        let sep = cert
            .evidence
            .iter()
            .find_map(|e| e.detail.get("separating_word").and_then(|w| w.as_str()).map(str::to_string))
            .ok_or(format!("m={m}: no separating word"))?;
        seps.push(sep);
    }
    Ok(format!("separating words {}", seps.join(" and ")))
}

/// Grassmann products on sorted index lists, sign by bubble sort.
fn naive_mul(a: &BTreeMap<Vec<u32>, i64>, b: &BTreeMap<Vec<u32>, i64>) -> BTreeMap<Vec<u32>, i64> {
    let mut out = BTreeMap::new();
    for (x, cx) in a {
        for (y, cy) in b {
            let mut idx: Vec<u32> = x.iter().chain(y).copied().collect();
            let mut sign = 1;
            for i in 0..idx.len() {
                for j in 0..idx.len() - 1 - i {
                    if idx[j] > idx[j + 1] {
                        idx.swap(j, j + 1);
                        sign = -sign;
                    }
                }
            }
            if idx.windows(2).any(|w| w[0] == w[1]) {
                continue;
            }
            *out.entry(idx).or_insert(0) += sign * cx * cy;
        }
    }
    out.retain(|_, c| *c != 0);
    out
}

/// `w_1 = [x1,x2] x1^(p-1) x2^(p-1)` expanded directly over the integers.
fn naive_w1(x1: &BTreeMap<Vec<u32>, i64>, x2: &BTreeMap<Vec<u32>, i64>, p: u32) -> BTreeMap<Vec<u32>, i64> {
    let mut c = naive_mul(x1, x2);
    for (k, v) in naive_mul(x2, x1) {
        *c.entry(k).or_insert(0) -= v;
    }
    c.retain(|_, v| *v != 0);
    let mut acc = c;
    for _ in 0..p - 1 {
        acc = naive_mul(&acc, x1);
    }
    for _ in 0..p - 1 {
        acc = naive_mul(&acc, x2);
    }
    acc
}

fn unitary_case() -> Outcome {
    for p in [3, 5] {
        pass_all(p, &["L-w-add-unitary", "tg-finite-field-identity"], None)?;
        let f = Field::new(p).unwrap();
        let mut r = ChaCha8Rng::seed_from_u64(7);
        let (n, bad) = xp_w_instances(f, &mut r, 200).map_err(|e| e.to_string())?;
        ensure(bad.is_none() && n == 200, format!("p={p} u^p w instance {bad:?}"))?;
        let (n, bad) = frobenius_instances(f, &mut r, 200).map_err(|e| e.to_string())?;
        ensure(bad.is_none() && n == 200, format!("p={p} u^(p^2) - u^p instance {bad:?}"))?;
    }
    Ok("additivity exact; 200 + 200 sampled instances per prime vanish".into())
}

fn phi_prime() -> Outcome {
    let mut v = Verifier::new(Params::new(3)).map_err(|e| e.to_string())?;
    let one = v.verify("phi-prime-decomp", Some(1)).map_err(|e| e.to_string())?;
    ensure(one.verdict == Verdict::Pass, "m=1 decomposition")?;
    let two = v.verify("phi-prime-decomp", Some(2)).map_err(|e| e.to_string())?;
    ensure(two.verdict == Verdict::Pass, "m=2 sampled decomposition")?;
    let note = |c: &picentral::Certificate| c.notes.iter().find(|n| n.contains("sign")).cloned().unwrap_or_default();
    Ok(format!("m=1 exact ({}); m=2 sampled ({})", note(&one), note(&two)))
}

fn controls_fail() -> Outcome {
    let mut count = 0;
    for p in [3, 5] {
        let mut v = Verifier::new(Params::new(p)).map_err(|e| e.to_string())?;
        for c in CLAIMS.iter().filter(|c| c.kind == ClaimKind::Control) {
            let cert = v.verify(c.key, None).map_err(|e| e.to_string())?;
            ensure(cert.verdict == Verdict::Fail, format!("{} at p={p} did not fail", c.key))?;
            ensure(cert.counterexample.is_some(), format!("{} at p={p}: no residual", c.key))?;
            count += 1;
        }
    }
    Ok(format!("{count} control runs fail with a residual"))
}

fn witnesses() -> Outcome {
    let f = Field::new(3).unwrap();
    let alg = GrassmannAlgebra::new(f, 10, Mode::Nonunital).unwrap();
    let w1 = build_w(f, Mode::Nonunital, 1, None).unwrap();
    let wit = find_witness(&w1, &alg, WitnessMode::Nonzero, 1000, 0)
        .map_err(|e| e.to_string())?
        .ok_or("no witness for w_1 in G(10)")?;
    ensure(wit.value.terms().all(|(b, _)| b == alg.top_blade()), format!("value {} is not a top-blade multiple", wit.value))?;
    let naive = |v: u32| -> BTreeMap<Vec<u32>, i64> {
        wit.assignment[&v]
            .terms()
            .map(|(b, c)| ((1..=10).filter(|i| b >> (i - 1) & 1 == 1).collect(), c as i64))
            .collect()
    };
    let expected: Vec<(Vec<u32>, i64)> = naive_w1(&naive(1), &naive(2), 3)
        .into_iter()
        .map(|(k, c)| (k, c.rem_euclid(3)))
        .filter(|(_, c)| *c != 0)
        .collect();
    ensure(
        expected == vec![((1..=10).collect(), wit.value.coeff(alg.top_blade()) as i64)],
        format!("expansion oracle gives {expected:?}, engine {}", wit.value),
    )?;
    for p in [3, 5] {
        let mut v = Verifier::new(Params::new(p)).map_err(|e| e.to_string())?;
        for m in [1, 2] {
            let cert = v.verify("w-central", Some(m)).map_err(|e| e.to_string())?;
            ensure(cert.verdict == Verdict::Pass, format!("w_{m} at p={p}: {}", cert.verdict.as_str()))?;
        }
    }
    Ok(format!("w_1 = {} on its witness; w_1, w_2 central and nonzero", wit.value))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("AC1 commutator identities", Duration::from_secs(300), commutator_identities),
        ("AC2 w_1 outside S2 + T(G0)", Duration::from_secs(10), w1_outside_s2_tg0),
        ("AC3 commutators lie on SPSS words", Duration::from_secs(120), s2_on_spss),
        ("AC4 normal forms evaluate correctly", Duration::from_secs(120), bss_evaluation),
        ("AC5 T(G0) instances reduce to zero", Duration::from_secs(60), identities_reduce_to_zero),
        ("AC6 chain strictness m = 0, 1", Duration::from_secs(120), chain),
        ("AC7 unitary additivity and finite-field identities", Duration::from_secs(120), unitary_case),
        ("AC8 phi' decomposition", Duration::from_secs(120), phi_prime),
        ("AC9 negative controls fail", Duration::from_secs(60), controls_fail),
        ("AC10 witnesses and centrality", Duration::from_secs(120), witnesses),
    ];
    let mut failed = 0;
    for (name, limit, run) in criteria {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let (ok, detail) = match outcome {
            Ok(d) if elapsed <= limit => (true, d),
            Ok(d) => (false, format!("{d}; over time limit")),
            Err(e) => (false, e),
        };
        if !ok {
            failed += 1;
        }
        println!(
            "{} {name} ({:.2}s, limit {}s): {detail}",
            if ok { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64(),
            limit.as_secs()
        );
    }
    println!("acceptance: {} of 10 criteria passed", 10 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
