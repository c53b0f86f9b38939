use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rug::Rational;
use serde::{Deserialize, Serialize};

use super::params::Params;
use super::registry::lookup;
use super::{IdentityDef, Mode, SlotKind};
use crate::error::{QError, QResult};
use crate::policy::Policy;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Strategy {
    Grid,
    Random,
}

impl std::str::FromStr for Strategy {
    type Err = QError;
    fn from_str(s: &str) -> QResult<Self> {
        match s {
            "grid" => Ok(Strategy::Grid),
            "random" => Ok(Strategy::Random),
            other => Err(QError::InvalidParams(format!(
                "unknown strategy `{other}` (expected grid or random)"
            ))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampleOptions {
    pub seed: u64,
    pub count: usize,
    pub strategy: Strategy,
    pub mode: Mode,
    /// Per-slot overrides of the default draw range.
    #[serde(default)]
    pub ranges: BTreeMap<String, (f64, f64)>,
}

impl SampleOptions {
    pub fn new(seed: u64, count: usize, strategy: Strategy, mode: Mode) -> Self {
        SampleOptions {
            seed,
            count,
            strategy,
            mode,
            ranges: BTreeMap::new(),
        }
    }
}

const PRIMES: [u64; 40] = [
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97,
    101, 103, 107, 109, 113, 127, 131, 137, 139, 149, 151, 157, 163, 167, 173,
];

fn radical_inverse(mut i: u64, base: u64) -> f64 {
    let mut f = 1.0 / base as f64;
    let mut r = 0.0;
    while i > 0 {
        r += f * (i % base) as f64;
        i /= base;
        f /= base as f64;
    }
    r
}

enum Source {
    Rng(ChaCha8Rng),
    Halton { index: u64, dim: usize },
}

/// Source of sampled values: a seeded stream or a low-discrepancy point.
pub struct Draw {
    src: Source,
    mode: Mode,
}

/// Float-mode scalars are multiples of this.
const DYADIC: i64 = 1 << 20;

impl Draw {
    pub fn unit(&mut self) -> f64 {
        match &mut self.src {
            Source::Rng(r) => r.gen::<f64>(),
            Source::Halton { index, dim } => {
                let b = PRIMES[*dim % PRIMES.len()];
                let shift = (*dim / PRIMES.len()) as f64 * 0.618_033_988_749_894_9;
                *dim += 1;
                (radical_inverse(*index + 1, b) + shift).fract()
            }
        }
    }

    /// A rational in `[lo, hi]`: a dyadic in float mode, a small-denominator
    /// fraction in exact mode.
    pub fn scalar(&mut self, lo: f64, hi: f64) -> Rational {
        let v = lo + self.unit() * (hi - lo);
        match self.mode {
            Mode::Float => {
                let k = (v * DYADIC as f64).round() as i64;
                let r = Rational::from((k, DYADIC));
                clamp(r, lo, hi, DYADIC)
            }
            Mode::Exact => {
                let d = 2 + (self.unit() * 10.0) as i64;
                let r = Rational::from(((v * d as f64).round() as i64, d));
                clamp(r, lo, hi, d)
            }
        }
    }

    pub fn int(&mut self, lo: i64, hi: i64) -> i64 {
        if hi <= lo {
            return lo;
        }
        let span = (hi - lo + 1) as f64;
        lo + ((self.unit() * span) as i64).min(hi - lo)
    }

    /// Uniform in `[-hi, -lo] ∪ [lo, hi]`.
    pub fn signed(&mut self, lo: f64, hi: f64) -> Rational {
        let neg = self.unit() < 0.5;
        let m = self.scalar(lo, hi);
        if neg {
            -m
        } else {
            m
        }
    }
}

fn clamp(r: Rational, lo: f64, hi: f64, den: i64) -> Rational {
    let step = Rational::from((1, den));
    let mut r = r;
    if r.to_f64() < lo {
        r += &step;
    }
    if r.to_f64() > hi {
        r -= &step;
    }
    r
}

fn id_hash(id: &str) -> u64 {
    // FNV-1a: stable across toolchains, unlike the std hasher
    id.bytes().fold(0xcbf2_9ce4_8422_2325u64, |h, b| {
        (h ^ b as u64).wrapping_mul(0x0100_0000_01b3)
    })
}

fn fill(def: &IdentityDef, opts: &SampleOptions, draw: &mut Draw, ints: Option<&[i64]>) -> Option<Params> {
    let mut p = Params::new();
    let mut int_ix = 0;
    for slot in &def.slots {
        let over = opts.ranges.get(slot.name).copied();
        match slot.kind {
            SlotKind::Scalar { lo, hi, min_abs } => {
                let (lo, hi) = over.unwrap_or((lo, hi));
                let v = draw.scalar(lo, hi);
                if v.to_f64().abs() < min_abs {
                    return None;
                }
                p.set_scalar(slot.name, v);
            }
            SlotKind::Int { sample, .. } => {
                let (lo, hi) = over.map(|(a, b)| (a as i64, b as i64)).unwrap_or(sample);
                let v = match ints {
                    Some(vals) => vals[int_ix],
                    None => draw.int(lo, hi),
                };
                int_ix += 1;
                p.set_int(slot.name, v);
            }
        }
    }
    if let Some(shape) = def.shape {
        if !shape(&mut p, draw) {
            return None;
        }
    }
    Some(p)
}

fn int_grid(def: &IdentityDef, opts: &SampleOptions) -> Vec<Vec<i64>> {
    let mut combos = vec![Vec::new()];
    for slot in &def.slots {
        if let SlotKind::Int { sample, .. } = slot.kind {
            let (lo, hi) = opts
                .ranges
                .get(slot.name)
                .map(|&(a, b)| (a as i64, b as i64))
                .unwrap_or(sample);
            combos = combos
                .into_iter()
                .flat_map(|c| {
                    (lo..=hi.max(lo)).map(move |v| {
                        let mut c = c.clone();
                        c.push(v);
                        c
                    })
                })
                .collect();
        }
    }
    combos
}

/// Deterministic admissible assignments for an identity.
pub fn sample_params(id: &str, opts: &SampleOptions, policy: &Policy) -> QResult<Vec<Params>> {
    let def = lookup(id)?;
    if opts.mode == Mode::Exact && !def.exact_capable {
        return Err(QError::ExactModeUnsupported(format!(
            "{id} has no exact evaluation"
        )));
    }
    let mut out = Vec::with_capacity(opts.count);
    let budget = 400 * opts.count + 2000;
    let admissible = |p: &Params| {
        def.violations(p, opts.mode, policy)
            .map(|v| v.is_empty())
            .unwrap_or(false)
    };
    match opts.strategy {
        Strategy::Random => {
            let mut draw = Draw {
                src: Source::Rng(ChaCha8Rng::seed_from_u64(opts.seed ^ id_hash(id))),
                mode: opts.mode,
            };
            for _ in 0..budget {
                if out.len() == opts.count {
                    break;
                }
                if let Some(p) = fill(def, opts, &mut draw, None) {
                    if admissible(&p) {
                        out.push(p);
                    }
                }
            }
        }
        Strategy::Grid => {
            let combos = int_grid(def, opts);
            let offset = opts.seed % 4096;
            'outer: for h in 0..budget as u64 {
                for combo in &combos {
                    if out.len() == opts.count {
                        break 'outer;
                    }
                    let mut draw = Draw {
                        src: Source::Halton {
                            index: offset + h,
                            dim: 0,
                        },
                        mode: opts.mode,
                    };
                    if let Some(p) = fill(def, opts, &mut draw, Some(combo)) {
                        if admissible(&p) {
                            out.push(p);
                        }
                    }
                }
            }
        }
    }
    if out.len() < opts.count {
        return Err(QError::InvalidParams(format!(
            "{id}: only {} of {} admissible points found in the sampling box",
            out.len(),
            opts.count
        )));
    }
    Ok(out)
}
