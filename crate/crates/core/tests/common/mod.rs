// Brute-force oracles written against the raw levels only: they never touch
// MetricProfile, the Scheme metric methods or the capture search.
#![allow(dead_code)]

use std::collections::BTreeSet;

use schemelab::capture::CaptureKind;
use schemelab::coding::CodedFamily;
use schemelab::scheme::OrdSet;
use schemelab::types::{norm_class, ConfigType, NormClass};
use schemelab::{Scheme, SchemeTypeSeq};

pub struct Raw {
    levels: Vec<Vec<OrdSet>>,
    sizes: Vec<usize>,
    roots: Vec<usize>,
    pub domain: usize,
    rho: Vec<usize>,
    card: Vec<Vec<usize>>,
}

impl Raw {
    pub fn new(s: &Scheme) -> Raw {
        let t = s.type_seq();
        let d = s.domain();
        // rho(a, b): the first level with a set holding both points
        let mut rho = vec![usize::MAX; d * d];
        for (k, level) in s.levels().iter().enumerate() {
            for f in level {
                for &a in f {
                    for &b in f {
                        rho[a * d + b] = rho[a * d + b].min(k);
                    }
                }
            }
        }
        let card = (0..d)
            .map(|a| {
                (0..=t.rank())
                    .map(|k| (0..a).filter(|&x| rho[a * d + x] <= k).count())
                    .collect()
            })
            .collect();
        Raw {
            levels: s.levels().to_vec(),
            sizes: t.sizes().to_vec(),
            roots: (0..=t.rank())
                .map(|k| if k == 0 { 0 } else { t.entries()[k - 1][2] })
                .collect(),
            domain: d,
            rho,
            card,
        }
    }

    pub fn rank(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn rho(&self, a: usize, b: usize) -> usize {
        let r = self.rho[a * self.domain + b];
        assert!(r != usize::MAX, "top level holds everything");
        r
    }

    pub fn card(&self, a: usize) -> Vec<usize> {
        self.card[a].clone()
    }

    pub fn delta(&self, a: usize, b: usize) -> Option<usize> {
        let (ca, cb) = (&self.card[a], &self.card[b]);
        (0..=self.rank()).find(|&k| ca[k] != cb[k])
    }

    pub fn xi(&self, a: usize, k: usize) -> i64 {
        if k == 0 {
            return 0;
        }
        let f = self.levels[k].iter().find(|f| f.contains(&a)).unwrap();
        let pos = f.iter().position(|&x| x == a).unwrap();
        let r = self.roots[k];
        if pos < r {
            -1
        } else {
            ((pos - r) / (self.sizes[k - 1] - r)) as i64
        }
    }

    pub fn captured(&self, fam: &[OrdSet], l: usize, kind: CaptureKind) -> bool {
        let root: BTreeSet<usize> = {
            let a: BTreeSet<usize> = fam[0].iter().copied().collect();
            let b: BTreeSet<usize> = fam[1].iter().copied().collect();
            a.intersection(&b).copied().collect()
        };
        for i in 0..fam.len() {
            for j in 0..fam.len() {
                if i != j {
                    let a: BTreeSet<usize> = fam[i].iter().copied().collect();
                    let b: BTreeSet<usize> = fam[j].iter().copied().collect();
                    if a.intersection(&b).copied().collect::<BTreeSet<_>>() != root {
                        return false;
                    }
                }
            }
        }
        let tails: Vec<Vec<usize>> = fam
            .iter()
            .map(|d| d.iter().copied().filter(|x| !root.contains(x)).collect())
            .collect();
        for t in &tails {
            if t.is_empty() || root.iter().any(|&r| r > t[0]) {
                return false;
            }
        }
        for i in 0..tails.len() {
            for j in 0..tails.len() {
                let (a, b) = (&tails[i], &tails[j]);
                if i != j && !(a.last() < b.first() || b.last() < a.first()) {
                    return false;
                }
            }
        }
        let r = root.len();
        let m = fam[0].len();
        for (j, d) in fam.iter().enumerate() {
            for (a, &x) in d.iter().enumerate() {
                let want = if a < r { -1 } else { j as i64 };
                if self.xi(x, l) != want {
                    return false;
                }
            }
            for e in &fam[j + 1..] {
                for a in r..m {
                    if self.delta(d[a], e[a]) != Some(l) {
                        return false;
                    }
                    if kind == CaptureKind::Captured && self.rho(d[a], e[a]) != l {
                        return false;
                    }
                }
            }
        }
        true
    }
}

pub fn permutations(
    pool: &[OrdSet],
    size: usize,
    out: &mut Vec<Vec<OrdSet>>,
    cur: &mut Vec<OrdSet>,
    used: &mut Vec<bool>,
) {
    if cur.len() == size {
        out.push(cur.clone());
        return;
    }
    for i in 0..pool.len() {
        if !used[i] {
            used[i] = true;
            cur.push(pool[i].clone());
            permutations(pool, size, out, cur, used);
            cur.pop();
            used[i] = false;
        }
    }
}

pub fn oracle_witnesses(
    raw: &Raw,
    t: &SchemeTypeSeq,
    pool: &[OrdSet],
    kind: CaptureKind,
) -> BTreeSet<(usize, Vec<OrdSet>)> {
    let mut found = BTreeSet::new();
    for l in 1..=raw.rank() {
        let sizes: BTreeSet<usize> = [2, t.pieces(l)].into_iter().collect();
        for s in sizes {
            if s > pool.len() {
                continue;
            }
            let mut all = Vec::new();
            permutations(
                pool,
                s,
                &mut all,
                &mut Vec::new(),
                &mut vec![false; pool.len()],
            );
            for fam in all {
                if raw.captured(&fam, l, kind) {
                    found.insert((l, fam));
                }
            }
        }
    }
    found
}

pub fn oracle_spectrum(codes: &CodedFamily, members: &[OrdSet]) -> BTreeSet<NormClass> {
    let mut out = BTreeSet::new();
    for (i, c) in members.iter().enumerate() {
        for (j, d) in members.iter().enumerate() {
            if i == j {
                continue;
            }
            let bits: Vec<u8> = c
                .iter()
                .zip(d)
                .map(|(&a, &b)| {
                    if codes.points[a].seq < codes.points[b].seq {
                        0
                    } else {
                        1
                    }
                })
                .collect();
            out.insert(norm_class(&ConfigType::new(bits).unwrap()));
        }
    }
    out
}
