//! Parameter specializations under which one registry entry collapses to
//! another. Each reduction is checked case by case on sampled points: both
//! sides of the general entry at the special values are compared with the
//! matching sides of the reduced entry.

use rug::Rational;

use super::params::Params;
use super::registry::lookup;
use super::sample::{sample_params, SampleOptions, Strategy};
use super::Mode;
use crate::error::QResult;
use crate::policy::Policy;
use crate::scalar::Scalar;
use crate::qcore::{phi_rs, HyperSpec, QBase};

/// Outcome of one reduction over a batch of cases.
#[derive(Clone, Debug)]
pub struct Reduction {
    pub name: &'static str,
    pub cases: usize,
    /// Largest relative gap between matching sides (0 for exact checks).
    pub worst: f64,
    pub tol: f64,
    pub failures: Vec<String>,
}

impl Reduction {
    pub fn passed(&self) -> bool {
        self.failures.is_empty() && self.cases > 0
    }
}

fn rel(a: f64, b: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    (a - b).abs() / a.abs().max(b.abs())
}

fn pick(p: &Params, names: &[(&str, &str)]) -> Params {
    let mut out = Params::new();
    for (from, to) in names {
        match p.get(from) {
            Some(super::ParamValue::Scalar(r)) => out.set_scalar(to, r.clone()),
            Some(super::ParamValue::Int(i)) => out.set_int(to, *i),
            None => continue,
        };
    }
    out
}

fn without(p: &Params, drop: &[&str]) -> Params {
    let mut out = Params::new();
    for (k, v) in p.iter() {
        if drop.contains(&k.as_str()) {
            continue;
        }
        match v {
            super::ParamValue::Scalar(r) => out.set_scalar(k, r.clone()),
            super::ParamValue::Int(i) => out.set_int(k, *i),
        };
    }
    out
}

type Map = fn(&Params) -> (Params, Params);

/// Compare `general` at the special point with `reduced`, side by side.
fn float_reduction(
    name: &'static str,
    general: &str,
    reduced: &str,
    map: Map,
    seed: u64,
    count: usize,
    tol: f64,
    pol: &Policy,
) -> QResult<Reduction> {
    let g = lookup(general)?;
    let r = lookup(reduced)?;
    let opts = SampleOptions::new(seed, count, Strategy::Random, Mode::Float);
    let mut out = Reduction { name, cases: 0, worst: 0.0, tol, failures: Vec::new() };
    for p in sample_params(general, &opts, pol)? {
        let (gp, rp) = map(&p);
        out.cases += 1;
        let sides = g
            .sides_f64(&gp, tol * 1e-3, pol)
            .and_then(|a| Ok((a, r.sides_f64(&rp, tol * 1e-3, pol)?)));
        match sides {
            Ok(((gl, gr), (rl, rr))) => {
                let gap = rel(gl, rl).max(rel(gr, rr));
                out.worst = out.worst.max(gap);
                if !(gap <= tol) {
                    out.failures.push(format!("{gp:?}: {gl} / {gr} vs {rl} / {rr}"));
                }
            }
            Err(e) => out.failures.push(format!("{gp:?}: {e}")),
        }
    }
    Ok(out)
}

fn set_scalar(p: &Params, name: &str, v: i64) -> Params {
    let mut out = p.clone();
    out.set_scalar(name, Rational::from(v));
    out
}

/// `2Φ1[q^{-n}, z; 0; q, q] = z^n`, exactly, on sampled rationals.
pub fn terminating_inner_sum(seed: u64, count: usize, n_max: usize) -> Reduction {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let pol = Policy::default();
    let mut out = Reduction { name: "inner q-Chu sum at y = 0", cases: 0, worst: 0.0, tol: 0.0, failures: Vec::new() };
    for _ in 0..count {
        let den: i64 = rng.gen_range(2..=13);
        let q = Rational::from((rng.gen_range(1..den), den));
        let z = Rational::from((rng.gen_range(-40..=40), rng.gen_range(1..=17)));
        let base = QBase::unchecked(q);
        for n in 0..=n_max {
            out.cases += 1;
            let top = base.powi(-(n as i64));
            let spec = HyperSpec::new(vec![top, z.clone()], vec![Rational::new()], &base, base.q().clone());
            let want = z.powi(n as i64).expect("nonnegative power");
            match phi_rs(&spec, &pol) {
                Ok(v) if v.value == want => {}
                Ok(v) => out.failures.push(format!("n={n} z={z} q={}: {} ≠ {want}", base.q(), v.value)),
                Err(e) => out.failures.push(format!("n={n} z={z}: {e}")),
            }
        }
    }
    out
}

/// `THM3_2` at `m = 0` against `CHU`, exactly.
fn exact_chu(seed: u64, count: usize, pol: &Policy) -> QResult<Reduction> {
    let g = lookup("THM3_2")?;
    let r = lookup("CHU")?;
    let mut opts = SampleOptions::new(seed, count, Strategy::Random, Mode::Exact);
    opts.ranges.insert("m".into(), (0.0, 0.0));
    let mut out = Reduction { name: "THM3_2 at m = 0 is CHU", cases: 0, worst: 0.0, tol: 0.0, failures: Vec::new() };
    for p in sample_params("THM3_2", &opts, pol)? {
        out.cases += 1;
        let rp = without(&p, &["m"]);
        match (g.sides_exact(&p, pol), r.sides_exact(&rp, pol)) {
            (Ok((gl, gr)), Ok((rl, rr))) if gl == rl && gr == rr => {}
            (Ok((gl, gr)), Ok((rl, rr))) => out.failures.push(format!("{p:?}: {gl}/{gr} vs {rl}/{rr}")),
            (Err(e), _) | (_, Err(e)) => out.failures.push(format!("{p:?}: {e}")),
        }
    }
    Ok(out)
}

/// Every reduction in the lattice, `count` sampled cases each.
pub fn degeneration_lattice(seed: u64, count: usize, pol: &Policy) -> QResult<Vec<Reduction>> {
    let tol = 1e-9;
    let mut out = vec![terminating_inner_sum(seed, count.max(1), 12)];
    let float: [(&'static str, &str, &str, Map); 9] = [
        ("THM2_1a at u = 0 is QBINOM_THM", "THM2_1a", "QBINOM_THM", |p| {
            (set_scalar(p, "u", 0), pick(p, &[("a", "a"), ("x", "z"), ("q", "q")]))
        }),
        ("THM3_1 at u = 0 is CHU", "THM3_1", "CHU", |p| {
            (set_scalar(p, "u", 0), pick(p, &[("x", "x"), ("y", "y"), ("q", "q"), ("n", "n")]))
        }),
        ("THM4_3 at r = 1 is AA", "THM4_3", "AA", |p| {
            let mut g = p.clone();
            g.set_int("M", 0);
            (g, without(p, &["f", "g", "v", "w", "M"]))
        }),
        ("THM4_4 at r = 1 is AA", "THM4_4", "AA", |p| {
            let mut g = p.clone();
            g.set_int("M", 0);
            (g, without(p, &["f", "g", "v", "w", "M"]))
        }),
        ("GENFUN_SA at λ = 0 is GENFUN_CAUCHY", "GENFUN_SA", "GENFUN_CAUCHY", |p| {
            (set_scalar(p, "lambda", 0), without(p, &["lambda"]))
        }),
        ("QBINOM_THM at a = 0 is EULER", "QBINOM_THM", "EULER", |p| {
            (set_scalar(p, "a", 0), without(p, &["a"]))
        }),
        ("THM2_2a at y = 0 is COR2_3a", "THM2_2a", "COR2_3a", |p| {
            (set_scalar(p, "y", 0), without(p, &["y"]))
        }),
        ("THM2_2b at y = 0 is COR2_3b", "THM2_2b", "COR2_3b", |p| {
            (set_scalar(p, "y", 0), without(p, &["y"]))
        }),
        ("THM3_2 at m = 0 is CHU (float)", "THM3_2", "CHU", |p| {
            let mut g = p.clone();
            g.set_int("m", 0);
            (g, without(p, &["m"]))
        }),
    ];
    for (name, general, reduced, map) in float {
        out.push(float_reduction(name, general, reduced, map, seed, count, tol, pol)?);
    }
    out.push(exact_chu(seed, count, pol)?);
    Ok(out)
}
