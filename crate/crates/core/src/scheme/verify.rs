//! Exhaustive checkers for the scheme axioms and the ordinal-metric lemmas.

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{decompose, seq_delta, Delta, MetricProfile, OrdSet, Ordinal, Scheme};
use crate::par;
use crate::report::{render_checks, Check};

#[derive(Clone, Debug)]
pub struct AxiomOptions {
    /// Enumerate every non-empty subset when the domain has at most this many points.
    pub exhaustive_cofinality_max: usize,
    pub cofinality_samples: usize,
    pub seed: u64,
}

impl Default for AxiomOptions {
    fn default() -> Self {
        AxiomOptions {
            exhaustive_cofinality_max: 20,
            cofinality_samples: 10_000,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum Coverage {
    Exhaustive { cases: u64 },
    Sampled { cases: u64, seed: u64 },
}

#[derive(Clone, Debug, Serialize)]
pub struct AxiomReport {
    pub rank: usize,
    pub domain: usize,
    pub sets_per_level: Vec<usize>,
    pub cofinality_coverage: Coverage,
    pub checks: Vec<Check>,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }

    pub fn first_failure(&self) -> Option<&Check> {
        self.checks.iter().find(|c| !c.passed())
    }

    pub fn to_text(&self) -> String {
        render_checks(
            &format!(
                "scheme axioms (rank {}, domain {}, sets per level {:?})",
                self.rank, self.domain, self.sets_per_level
            ),
            &self.checks,
        )
    }
}

/// True when `e ∩ f` is an initial segment of both: after the longest
/// common prefix the remainders must be disjoint.
pub fn initial_intersection(e: &[Ordinal], f: &[Ordinal]) -> bool {
    let p = e.iter().zip(f).take_while(|(x, y)| x == y).count();
    let (mut i, mut j) = (p, p);
    while i < e.len() && j < f.len() {
        match e[i].cmp(&f[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => return false,
        }
    }
    true
}

/// Level sizes, clause (i) over all same-level pairs, clause (ii) over every
/// set above level 0, and cofinality.
pub fn verify_scheme_axioms(s: &Scheme, opts: &AxiomOptions) -> AxiomReport {
    let t = s.type_seq();
    let mut sizes = Check::new("level_sizes");
    for (k, level) in s.levels().iter().enumerate() {
        for f in level {
            sizes.record(f.len() == t.level_size(k), || {
                format!(
                    "level {k}: {f:?} has {} points, expected {}",
                    f.len(),
                    t.level_size(k)
                )
            });
        }
    }

    let mut clause_i = Check::new("(i) initial-segment intersections");
    for (k, level) in s.levels().iter().enumerate() {
        let n = level.len();
        let failures = par::flat_map_range(n, |a| {
            let e = &level[a];
            level[a + 1..]
                .iter()
                .filter(|f| !initial_intersection(e, f))
                .map(|f| format!("level {k}: {e:?} ∩ {f:?} is not initial in both"))
                .collect()
        });
        clause_i.absorb((n * n.saturating_sub(1) / 2) as u64, failures);
    }

    let mut clause_ii = Check::new("(ii) canonical decompositions");
    for k in 1..=s.rank() {
        for f in s.level(k) {
            let ok_and_msg = match decompose(t, k, f) {
                None => Some(format!(
                    "level {k}: {f:?} cannot be decomposed (wrong size)"
                )),
                Some(d) => d
                    .pieces
                    .iter()
                    .enumerate()
                    .find(|(_, p)| !s.contains_set(k - 1, p))
                    .map(|(i, p)| {
                        format!(
                            "level {k}: piece {i} {p:?} of {f:?} is not a level-{} set",
                            k - 1
                        )
                    }),
            };
            clause_ii.record(ok_and_msg.is_none(), || ok_and_msg.unwrap_or_default());
        }
    }

    let (cofinality, coverage) = check_cofinality(s, opts);
    AxiomReport {
        rank: s.rank(),
        domain: s.domain(),
        sets_per_level: s.levels().iter().map(Vec::len).collect(),
        cofinality_coverage: coverage,
        checks: vec![sizes, clause_i, clause_ii, cofinality],
    }
}

fn covered(s: &Scheme, subset: &[Ordinal]) -> bool {
    let Some(&first) = subset.first() else {
        return true;
    };
    (0..=s.rank()).rev().any(|k| {
        s.sets_containing(k, first)
            .any(|f| subset.iter().all(|x| f.binary_search(x).is_ok()))
    })
}

fn check_cofinality(s: &Scheme, opts: &AxiomOptions) -> (Check, Coverage) {
    let mut check = Check::new("cofinality");
    let d = s.domain();
    if d <= opts.exhaustive_cofinality_max && d < 64 {
        let mut masks: Vec<u64> = s
            .levels()
            .iter()
            .flatten()
            .map(|f| f.iter().fold(0u64, |m, &x| m | 1 << x))
            .collect();
        masks.sort_unstable();
        masks.dedup();
        let maximal: Vec<u64> = masks
            .iter()
            .copied()
            .filter(|&m| !masks.iter().any(|&o| o != m && o & m == m))
            .collect();
        let total = (1u64 << d) - 1;
        for subset in 1..=total {
            check.record(maximal.iter().any(|&m| m & subset == subset), || {
                let v: OrdSet = (0..d).filter(|&x| subset >> x & 1 == 1).collect();
                format!("{v:?} lies in no set of the scheme")
            });
        }
        (check, Coverage::Exhaustive { cases: total })
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        for _ in 0..opts.cofinality_samples {
            let size = rng.gen_range(1..=d.min(64));
            let mut subset: OrdSet = sample(&mut rng, d, size).into_vec();
            subset.sort_unstable();
            check.record(covered(s, &subset), || {
                format!("{subset:?} lies in no set of the scheme")
            });
        }
        (
            check,
            Coverage::Sampled {
                cases: opts.cofinality_samples as u64,
                seed: opts.seed,
            },
        )
    }
}

#[derive(Clone, Debug)]
pub struct MetricOptions {
    /// Pairs and triples are enumerated exhaustively up to this domain size.
    pub exhaustive_domain: usize,
    pub samples: usize,
    pub seed: u64,
}

impl Default for MetricOptions {
    fn default() -> Self {
        MetricOptions {
            exhaustive_domain: 600,
            samples: 200_000,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct MetricReport {
    pub rank: usize,
    pub domain: usize,
    pub coverage: Coverage,
    pub checks: Vec<Check>,
}

impl MetricReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn to_text(&self) -> String {
        render_checks(
            &format!(
                "ordinal-metric lemmas (rank {}, domain {})",
                self.rank, self.domain
            ),
            &self.checks,
        )
    }
}

/// `rho` straight from the definition, as a dense table when small.
struct RhoDef<'a> {
    scheme: &'a Scheme,
    table: Option<Vec<u8>>,
}

impl<'a> RhoDef<'a> {
    fn new(scheme: &'a Scheme, dense: bool) -> Self {
        let table = dense.then(|| {
            let d = scheme.domain();
            let mut t = vec![u8::MAX; d * d];
            for (k, level) in scheme.levels().iter().enumerate() {
                for f in level {
                    for &a in f {
                        for &b in f {
                            let cell = &mut t[a * d + b];
                            if *cell == u8::MAX {
                                *cell = k as u8;
                            }
                        }
                    }
                }
            }
            t
        });
        RhoDef { scheme, table }
    }

    fn get(&self, a: Ordinal, b: Ordinal) -> Option<usize> {
        match &self.table {
            Some(t) => {
                let v = t[a * self.scheme.domain() + b];
                (v != u8::MAX).then_some(v as usize)
            }
            None => self.scheme.rho(a, b).ok(),
        }
    }
}

/// Exhaustive (or, above the size limit, sampled) check of om1-om3, the
/// closure identity, `rho^F = k` on level-`k` sets, well-definedness of
/// `Xi`, xi_a-xi_d and `Delta(alpha, beta) = Delta(Xi_alpha, Xi_beta)`.
/// om4 (finite closures) holds vacuously on a finite domain.
pub fn verify_metric_lemmas(s: &Scheme, opts: &MetricOptions) -> MetricReport {
    let d = s.domain();
    let rank = s.rank();
    let exhaustive = d <= opts.exhaustive_domain;
    let rho = RhoDef::new(s, exhaustive);
    let rho_ok = |a, b| rho.get(a, b).unwrap_or(usize::MAX);

    let mut checks = Vec::new();

    // definitional closures and cardinalities
    let card_def: Vec<Vec<usize>> = if exhaustive {
        (0..d)
            .map(|a| {
                (0..=rank)
                    .map(|k| (0..a).filter(|&x| rho_ok(a, x) <= k).count())
                    .collect()
            })
            .collect()
    } else {
        Vec::new()
    };
    let card_of = |a: Ordinal| -> Vec<usize> {
        if exhaustive {
            card_def[a].clone()
        } else {
            s.card_fn(a).unwrap_or_default()
        }
    };

    let xi_def: Vec<Result<Vec<i64>, String>> =
        (0..d).map(|a| s.xi(a).map_err(|e| e.to_string())).collect();
    let mut xi_wd = Check::new("xi_well_defined");
    for (a, x) in xi_def.iter().enumerate() {
        xi_wd.record(x.is_ok(), || {
            format!(
                "alpha={a}: {}",
                x.as_ref().err().cloned().unwrap_or_default()
            )
        });
    }

    let profile = MetricProfile::new(s);
    let mut routes = Check::new("profile_matches_definitions");
    match &profile {
        Ok(p) => {
            let idx: Vec<Ordinal> = if exhaustive {
                (0..d).collect()
            } else {
                sample_ordinals(d, opts)
            };
            for a in idx {
                let card: Vec<usize> = p.card_fn(a).iter().map(|&x| x as usize).collect();
                let xi: Vec<i64> = p.xi_seq(a).iter().map(|&x| x as i64).collect();
                let ok = card == card_of(a) && xi_def[a].as_ref().is_ok_and(|v| *v == xi);
                routes.record(ok, || {
                    format!("alpha={a}: profile tables disagree with definitions")
                });
            }
        }
        Err(e) => routes.record(false, || e.to_string()),
    }

    // pairs
    let pairs: Vec<(Ordinal, Ordinal)> = if exhaustive {
        (0..d).flat_map(|a| (a..d).map(move |b| (a, b))).collect()
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        (0..opts.samples)
            .map(|_| {
                let a = rng.gen_range(0..d);
                let b = rng.gen_range(0..d);
                (a.min(b), a.max(b))
            })
            .collect()
    };

    let mut om1 = Check::new("om1");
    let mut om2 = Check::new("om2");
    let mut xi_a = Check::new("xi_a");
    let mut xi_b = Check::new("xi_b");
    let mut xi_c = Check::new("xi_c");
    let mut xi_d = Check::new("xi_d");
    let mut transfer = Check::new("delta_xi_transfer");
    for &(a, b) in &pairs {
        let r = rho_ok(a, b);
        om1.record((r == 0) == (a == b), || format!("rho({a},{b})={r}"));
        let r2 = rho_ok(b, a);
        om2.record(r == r2, || {
            format!("rho({a},{b})={r} but rho({b},{a})={r2}")
        });
        let (Ok(xa), Ok(xb)) = (&xi_def[a], &xi_def[b]) else {
            continue;
        };
        let delta = seq_delta(&card_of(a), &card_of(b));
        let xdelta = seq_delta(xa, xb);
        transfer.record(delta == xdelta, || {
            format!("Delta({a},{b})={delta} but Delta(Xi)={xdelta}")
        });
        if a == b {
            continue;
        }
        for k in 1..=rank {
            let (u, v) = (xa[k], xb[k]);
            if Delta::At(k) < delta {
                xi_a.record(u == v, || {
                    format!("({a},{b}) k={k}: Xi {u} != {v} below Delta={delta}")
                });
            }
            if k == r {
                xi_b.record(0 <= u && u < v, || {
                    format!("({a},{b}) k=rho={k}: Xi {u}, {v}")
                });
            }
            if k > r {
                xi_c.record(u == -1 || u == v, || {
                    format!("({a},{b}) k={k} > rho={r}: Xi {u}, {v}")
                });
            }
            if Delta::At(k) == delta {
                xi_d.record(u >= 0 && v >= 0 && u != v, || {
                    format!("({a},{b}) k=Delta={k}: Xi {u}, {v}")
                });
            }
        }
    }

    // triples
    let mut om3 = Check::new("om3");
    if exhaustive {
        let failures = par::flat_map_range(d, |a| {
            let mut bad = Vec::new();
            for b in a..d {
                let rab = rho_ok(a, b);
                for c in a..d {
                    if rab > rho_ok(a, c).max(rho_ok(b, c)) {
                        bad.push(format!("alpha={a}, beta={b}, gamma={c}"));
                        if bad.len() > 4 {
                            return bad;
                        }
                    }
                }
            }
            bad
        });
        let n = d as u64;
        om3.absorb(n * (n + 1) * (2 * n + 1) / 6, failures);
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ 0x9e37_79b9);
        for _ in 0..opts.samples {
            let mut v = [
                rng.gen_range(0..d),
                rng.gen_range(0..d),
                rng.gen_range(0..d),
            ];
            v.sort_unstable();
            let [a, b, c] = v;
            for (b, c) in [(b, c), (c, b)] {
                om3.record(rho_ok(a, b) <= rho_ok(a, c).max(rho_ok(b, c)), || {
                    format!("alpha={a}, beta={b}, gamma={c}")
                });
            }
        }
    }
    let om4 = Check::new("om4").with_note("closures of a finite domain are finite; vacuous");

    // closure identity and rho^F
    let mut closure_id = Check::new("closure_identity");
    let mut rho_level = Check::new("rho_of_level_set");
    for (k, level) in s.levels().iter().enumerate() {
        let sets: Vec<&OrdSet> = if exhaustive {
            level.iter().collect()
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(opts.seed.wrapping_add(k as u64));
            let take = level.len().min(200);
            sample(&mut rng, level.len(), take)
                .into_iter()
                .map(|i| &level[i])
                .collect()
        };
        for f in sets {
            for (pos, &a) in f.iter().enumerate() {
                let expected = card_of(a).get(k).copied().unwrap_or(usize::MAX);
                let ok = expected == pos && f[..pos].iter().all(|&x| rho_ok(a, x) <= k);
                closure_id.record(ok, || {
                    format!("level {k}, F={f:?}, alpha={a}: F∩(alpha+1) != (alpha)_k")
                });
            }
            let mut top = 0;
            for (i, &a) in f.iter().enumerate() {
                for &b in &f[i + 1..] {
                    top = top.max(rho_ok(a, b));
                }
            }
            rho_level.record(top == k, || {
                format!("rho^F = {top} for level-{k} set {f:?}")
            });
        }
    }

    checks.extend([
        om1, om2, om3, om4, closure_id, rho_level, xi_wd, routes, xi_a, xi_b, xi_c, xi_d, transfer,
    ]);
    MetricReport {
        rank,
        domain: d,
        coverage: if exhaustive {
            Coverage::Exhaustive {
                cases: pairs.len() as u64,
            }
        } else {
            Coverage::Sampled {
                cases: opts.samples as u64,
                seed: opts.seed,
            }
        },
        checks,
    }
}

fn sample_ordinals(d: usize, opts: &MetricOptions) -> Vec<Ordinal> {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut v = sample(&mut rng, d, d.min(2000)).into_vec();
    v.sort_unstable();
    v
}
