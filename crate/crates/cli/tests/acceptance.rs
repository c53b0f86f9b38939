//! Acceptance run: one line per criterion, non-zero exit if any fails.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use qseries::identities::degenerate::degeneration_lattice;
use qseries::identities::oracles::{binomial_expansion_fn, chu_expansion_fn};
use qseries::identities::{lookup, sample_params, Mode, Params, SampleOptions, Strategy, Verdict};
use qseries::qcore::{pinf, poch_finite, qbinom, QBase};
use qseries::qops::{
    diffeq_sides, lattice_bits, leibniz_apply, lemma_closed_form, qdiff_apply, DiffEq, DiffKind,
    FuncHandle, LemmaId, LemmaParams,
};
use qseries::{Float, Policy, Rational, Scalar};
use qverify::{run_sweep, SweepConfig};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

struct Outcome {
    ok: bool,
    detail: String,
}

impl Outcome {
    fn new(ok: bool, detail: impl Into<String>) -> Self {
        Outcome { ok, detail: detail.into() }
    }

    fn and(self, other: Outcome) -> Outcome {
        Outcome::new(self.ok && other.ok, format!("{}; {}", self.detail, other.detail))
    }
}

fn rel(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / a.abs().max(b.abs())
    }
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn rat(r: &mut ChaCha8Rng) -> Rational {
    Rational::from((r.gen_range(-40i64..=40), r.gen_range(1i64..=25)))
}

fn rat_base(r: &mut ChaCha8Rng) -> QBase<Rational> {
    let d = r.gen_range(2i64..=12);
    QBase::unchecked(Rational::from((r.gen_range(1..d), d)))
}

fn signed(r: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    let v = r.gen_range(lo..hi);
    if r.gen::<bool>() {
        -v
    } else {
        v
    }
}

fn opts(seed: u64, count: usize, mode: Mode, ranges: &[(&str, f64, f64)]) -> SampleOptions {
    let mut o = SampleOptions::new(seed, count, Strategy::Random, mode);
    o.ranges = ranges.iter().map(|&(k, lo, hi)| (k.to_string(), (lo, hi))).collect::<BTreeMap<_, _>>();
    o
}

/// Evaluate every sampled case of `id`; all of them must pass.
fn registry_batch(id: &str, o: &SampleOptions, tol: Option<f64>) -> Outcome {
    let pol = Policy::default();
    let def = match lookup(id) {
        Ok(d) => d,
        Err(e) => return Outcome::new(false, format!("{id}: {e}")),
    };
    let pts = match sample_params(id, o, &pol) {
        Ok(p) => p,
        Err(e) => return Outcome::new(false, format!("{id}: {e}")),
    };
    let reports: Vec<_> = pts.par_iter().map(|p| def.evaluate(p, o.mode, tol, &pol)).collect();
    let mut pass = 0;
    let mut worst = 0.0f64;
    let mut first_bad = None;
    for (p, r) in pts.iter().zip(&reports) {
        match r {
            Ok(r) if r.verdict == Verdict::Pass => {
                pass += 1;
                worst = worst.max(r.rel_residual.unwrap_or(0.0));
            }
            Ok(r) => {
                first_bad.get_or_insert_with(|| format!("{:?} {:?} {:?}", p, r.verdict, r.rel_residual));
            }
            Err(e) => {
                first_bad.get_or_insert_with(|| format!("{p:?}: {e}"));
            }
        }
    }
    let mut detail = format!("{id} {pass}/{} (worst rel {worst:.1e})", pts.len());
    if let Some(b) = first_bad {
        detail.push_str(&format!(" first failure {b}"));
    }
    Outcome::new(pass == pts.len() && !pts.is_empty(), detail)
}

fn first(bad: &[String]) -> String {
    bad.first().map(|b| format!(" first failure {b}")).unwrap_or_default()
}

fn combine(parts: Vec<Outcome>) -> Outcome {
    parts.into_iter().reduce(Outcome::and).unwrap_or_else(|| Outcome::new(false, "nothing ran"))
}

fn within(o: Outcome, took: Duration, budget: Option<Duration>) -> Outcome {
    match budget {
        Some(b) if took > b => Outcome::new(false, format!("{} [over budget {:?}]", o.detail, b)),
        _ => o,
    }
}

fn exact_suite() -> Outcome {
    let mut parts = vec![
        registry_batch("CHU", &opts(101, 500, Mode::Exact, &[("n", 0.0, 30.0)]), None),
        registry_batch("THM3_2", &opts(102, 200, Mode::Exact, &[("n", 0.0, 10.0), ("m", 0.0, 10.0)]), None),
    ];
    let remark: Vec<Outcome> = (0..=20)
        .map(|m| registry_batch("REMARK3", &opts(103 + m, 5, Mode::Exact, &[("m", m as f64, m as f64)]), None))
        .collect();
    let ok = remark.iter().all(|o| o.ok);
    parts.push(Outcome::new(ok, format!("REMARK3 m=0..20 x5 {}", if ok { "all exact" } else { "mismatch" })));

    let mut r = rng(104);
    let mut bad = 0;
    for _ in 0..1000 {
        let q = rat_base(&mut r);
        let n = r.gen_range(1usize..20);
        let k = r.gen_range(0i64..20);
        let pascal = qbinom(n - 1, k - 1, &q) + q.powi(k) * qbinom(n - 1, k, &q);
        if qbinom(n, k, &q) != pascal {
            bad += 1;
        }
    }
    parts.push(Outcome::new(bad == 0, format!("q-Pascal {}/1000", 1000 - bad)));

    let mut bad = 0;
    for _ in 0..1000 {
        let (a, q) = (rat(&mut r), rat_base(&mut r));
        let (n, m) = (r.gen_range(0usize..14), r.gen_range(0usize..14));
        let split = poch_finite(&a, &q, n) * poch_finite(&(a.clone() * &q.pow(n)), &q, m);
        if poch_finite(&a, &q, n + m) != split {
            bad += 1;
        }
    }
    parts.push(Outcome::new(bad == 0, format!("Pochhammer split {}/1000", 1000 - bad)));
    combine(parts)
}

fn binomial_family() -> Outcome {
    let ids = ["QBINOM_THM", "EULER", "EULER_INV", "GENFUN_SA", "GENFUN_CAUCHY"];
    combine(
        ids.iter()
            .enumerate()
            .map(|(i, id)| registry_batch(id, &opts(200 + i as u64, 1000, Mode::Float, &[]), Some(1e-10)))
            .collect(),
    )
}

fn lemma_cases() -> Outcome {
    let mut r = rng(301);
    let pol = Policy::default();
    let mut worst = 0.0f64;
    let mut bad = Vec::new();
    for case in 0..200 {
        let id = LemmaId::ALL[case % 6];
        let order = r.gen_range(0usize..=5);
        let a = signed(&mut r, 0.05, 0.6);
        let (s, w, q) = (signed(&mut r, 0.0, 0.6), signed(&mut r, 0.0, 0.6), r.gen_range(0.2..0.8));
        let bits = lattice_bits(order, a.abs(), s.abs().max(w.abs()).max(0.5), q, 1e-14) + 64;
        let lift = |v: f64| Float::with_val(bits, v);
        let (am, sm, wm) = (lift(a), lift(s), lift(w));
        let b = QBase::unchecked(lift(q));
        let kernel = |x: &Float| -> qseries::QResult<Float> {
            let num = pinf(&(x.clone() * &sm), &b, &pol)?;
            match id {
                LemmaId::Id1 | LemmaId::Id2 => x.one().checked_div(&num, "(as)"),
                LemmaId::Id3 | LemmaId::Id4 => Ok(num),
                LemmaId::Id5 | LemmaId::Id6 => num.checked_div(&pinf(&(x.clone() * &wm), &b, &pol)?, "(aw)"),
            }
        };
        let f = FuncHandle::new("kernel", kernel);
        let kind = match id {
            LemmaId::Id1 | LemmaId::Id3 | LemmaId::Id5 => DiffKind::D,
            _ => DiffKind::Theta,
        };
        let params = LemmaParams { a: am.clone(), s: sm.clone(), omega: wm.clone(), order };
        match (lemma_closed_form(id, &params, &b, &pol), qdiff_apply(kind, &f, &am, &b, order)) {
            (Ok(c), Ok(i)) => {
                let e = rel(c.to_f64(), i.to_f64());
                worst = worst.max(e);
                if e > 1e-10 {
                    bad.push(format!("{id:?} order {order}: {e:.1e}"));
                }
            }
            (Err(e), _) | (_, Err(e)) => bad.push(format!("{id:?} order {order}: {e}")),
        }
    }
    Outcome::new(bad.is_empty(), format!("lemma 200 cases worst {worst:.1e}{}", first(&bad)))
}

fn leibniz_cases() -> Outcome {
    let mut r = rng(302);
    let pol = Policy::default();
    let bits = 256;
    let mut worst = 0.0f64;
    let mut bad = Vec::new();
    for case in 0..200 {
        let kind = if case % 2 == 0 { DiffKind::D } else { DiffKind::Theta };
        let n = r.gen_range(0usize..=4);
        let lift = |v: f64| Float::with_val(bits, v);
        let (a, s, z) = (lift(signed(&mut r, 0.05, 0.7)), lift(signed(&mut r, 0.0, 0.7)), lift(signed(&mut r, 0.0, 0.7)));
        let b = QBase::unchecked(lift(r.gen_range(0.2..0.8)));
        let f = FuncHandle::new("1/(1-st)", |t: &Float| t.one().checked_div(&(t.one() - &(s.clone() * t)), "1-st"));
        let g = FuncHandle::new("(zt;q)_inf", |t: &Float| pinf(&(z.clone() * t), &b, &pol));
        let fg = FuncHandle::new("fg", |t: &Float| Ok(f.eval(t)? * &g.eval(t)?));
        match (leibniz_apply(kind, &f, &g, &a, &b, n), qdiff_apply(kind, &fg, &a, &b, n)) {
            (Ok(x), Ok(y)) => {
                let e = rel(x.to_f64(), y.to_f64());
                worst = worst.max(e);
                if e > 1e-10 {
                    bad.push(format!("{kind:?} n={n}: {e:.1e}"));
                }
            }
            (Err(e), _) | (_, Err(e)) => bad.push(format!("{kind:?} n={n}: {e}")),
        }
    }
    Outcome::new(bad.is_empty(), format!("Leibniz 200 cases worst {worst:.1e}{}", first(&bad)))
}

fn operator_suite() -> Outcome {
    let mut parts = vec![lemma_cases(), leibniz_cases()];
    for (i, id) in ["THM1_3_T", "THM1_3_E", "COR1_4_T", "COR1_4_E"].iter().enumerate() {
        parts.push(registry_batch(id, &opts(310 + i as u64, 50, Mode::Float, &[("N", 25.0, 25.0)]), Some(1e-6)));
    }
    combine(parts)
}

fn point(r: &mut ChaCha8Rng) -> [f64; 7] {
    let mut p = [0.0; 7];
    for v in p.iter_mut().take(5) {
        *v = r.gen_range(-0.3..0.3);
    }
    p[5] = signed(r, 0.02, 0.3);
    p[6] = r.gen_range(-0.2..0.2);
    p
}

fn residual_suite() -> Outcome {
    let pol = Policy::default();
    let mut r = rng(401);
    let mut out = Vec::new();
    for which in ["F", "G"] {
        let mut worst = 0.0f64;
        let mut bad = Vec::new();
        for _ in 0..50 {
            let q = QBase::unchecked(r.gen_range(0.2..0.7));
            let pt = point(&mut r);
            let func = if which == "F" {
                binomial_expansion_fn(r.gen_range(-0.8..0.8), r.gen_range(-0.8..0.8), q.clone(), pol.clone())
            } else {
                chu_expansion_fn(r.gen_range(0usize..6), signed(&mut r, 0.3, 0.9), q.clone(), pol.clone())
            };
            match diffeq_sides(DiffEq::I, &func, &pt, &q) {
                Ok((l, rr)) => {
                    let e = (l - rr).abs();
                    worst = worst.max(e);
                    if !(e <= 1e-9) {
                        bad.push(format!("{pt:?}: {e:.1e}"));
                    }
                }
                Err(e) => bad.push(format!("{pt:?}: {e}")),
            }
        }
        out.push(Outcome::new(bad.is_empty(), format!("{which} 50 points worst abs {worst:.1e}{}", first(&bad))));
    }
    combine(out)
}

fn generalization_suite() -> Outcome {
    let ids = ["THM2_1a", "THM2_1b", "THM2_2a", "THM2_2b", "COR2_3a", "COR2_3b", "THM3_1"];
    combine(
        ids.iter()
            .enumerate()
            .map(|(i, id)| registry_batch(id, &opts(500 + i as u64, 100, Mode::Float, &[]), Some(1e-8)))
            .collect(),
    )
}

fn collapse_case() -> Outcome {
    let pol = Policy::default();
    let def = lookup("AA").expect("AA");
    let pts = sample_params("AA", &opts(601, 20, Mode::Float, &[]), &pol).expect("AA sample");
    let mut worst = 0.0f64;
    let mut bad = Vec::new();
    for p in pts {
        let mut p: Params = p;
        let c = p.scalar("q").unwrap().clone() * p.scalar("d").unwrap();
        p.set_scalar("c", c);
        match def.sides_f64(&p, 1e-9, &pol) {
            Ok((l, r)) => {
                worst = worst.max(l.abs()).max(r.abs());
                if l.abs() > 1e-12 || r.abs() > 1e-12 {
                    bad.push(format!("{p:?}: {l:e} {r:e}"));
                }
            }
            Err(e) => bad.push(format!("{p:?}: {e}")),
        }
    }
    Outcome::new(bad.is_empty(), format!("c = qd 20 cases max |side| {worst:.1e}{}", first(&bad)))
}

fn integral_suite() -> Outcome {
    combine(vec![
        registry_batch("AA", &opts(600, 200, Mode::Float, &[]), Some(1e-9)),
        collapse_case(),
        registry_batch("PROP4_2a", &opts(610, 50, Mode::Float, &[("N", 1.0, 6.0)]), Some(1e-7)),
        registry_batch("PROP4_2b", &opts(611, 50, Mode::Float, &[("N", 1.0, 6.0)]), Some(1e-7)),
        registry_batch("THM4_3", &opts(612, 50, Mode::Float, &[("M", 1.0, 6.0)]), Some(1e-7)),
        registry_batch("THM4_4", &opts(613, 50, Mode::Float, &[("M", 1.0, 6.0)]), Some(1e-7)),
    ])
}

fn lattice() -> Outcome {
    match degeneration_lattice(701, 20, &Policy::default()) {
        Ok(all) => combine(
            all.iter()
                .map(|r| {
                    let mut d = format!("{} {} cases worst {:.1e}", r.name, r.cases, r.worst);
                    if let Some(f) = r.failures.first() {
                        d.push_str(&format!(" first failure {f}"));
                    }
                    Outcome::new(r.passed() && r.worst <= 1e-9, d)
                })
                .collect(),
        ),
        Err(e) => Outcome::new(false, e.to_string()),
    }
}

fn determinism() -> Outcome {
    let mut cfg = SweepConfig::default();
    cfg.identities = vec!["all".into()];
    cfg.count = 3;
    cfg.seed = 801;
    let render = |parallel: usize| -> Result<(String, String), String> {
        let mut c = cfg.clone();
        c.parallel = parallel;
        let rep = run_sweep(&c).map_err(|e| e.to_string())?;
        Ok((rep.to_json().map_err(|e| e.to_string())?, rep.to_csv().map_err(|e| e.to_string())?))
    };
    match (render(1), render(8), render(1)) {
        (Ok(a), Ok(b), Ok(c)) => {
            let same = a == b && a == c;
            Outcome::new(same, format!("{} JSON bytes, parallel 1/8/1 identical: {same}", a.0.len()))
        }
        (Err(e), _, _) | (_, Err(e), _) | (_, _, Err(e)) => Outcome::new(false, e),
    }
}

fn main() {
    type Criterion = (u32, fn() -> Outcome, Option<u64>);
    let criteria: [Criterion; 8] = [
        (1, exact_suite, Some(10)),
        (2, binomial_family, Some(30)),
        (3, operator_suite, Some(120)),
        (4, residual_suite, Some(60)),
        (5, generalization_suite, Some(180)),
        (6, integral_suite, Some(180)),
        (7, lattice, None),
        (8, determinism, None),
    ];
    let mut failed = 0;
    for (n, f, budget) in criteria {
        let t = Instant::now();
        let o = f();
        let took = t.elapsed();
        let o = within(o, took, budget.map(Duration::from_secs));
        if !o.ok {
            failed += 1;
        }
        let verdict = if o.ok { "PASS" } else { "FAIL" };
        println!("criterion {n}: {verdict} ({:.2}s) {}", took.as_secs_f64(), o.detail);
    }
    if failed > 0 {
        eprintln!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
