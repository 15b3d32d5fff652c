//! Type spectra of coded tuple families and the finite realization,
//! avoidance and increasing-set checks built on them.
//!
//! Nothing here aborts on a falsified claim: every verifier returns a report
//! whose counters say what held and what did not.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Serialize, Serializer};

use crate::capture::{
    check_capture, find_captures, CaptureKind, CaptureQuery, CaptureWitness, SearchCoverage,
};
use crate::coding::{CodeKind, CodedFamily, SubsetEnumeration};
use crate::error::{Error, Result};
use crate::par;
use crate::report::{render_checks, Check};
use crate::scheme::{Delta, MetricProfile, OrdSet, Ordinal};
use crate::types::{norm_class, ConfigType, NormClass};

fn ser_display<T: std::fmt::Display, S: Serializer>(
    v: &T,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(v)
}

/// Pairwise-disjoint increasing tuples of one arity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrdinalTupleFamily {
    arity: usize,
    members: Vec<OrdSet>,
}

impl OrdinalTupleFamily {
    pub fn new(members: Vec<OrdSet>) -> Result<Self> {
        let arity = members.first().map_or(0, Vec::len);
        if arity == 0 {
            return Err(Error::Precondition(
                "a tuple family needs nonempty members".into(),
            ));
        }
        let mut seen = std::collections::HashSet::new();
        for m in &members {
            if m.len() != arity {
                return Err(Error::LengthMismatch {
                    left: arity,
                    right: m.len(),
                });
            }
            if m.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::NotIncreasing);
            }
            for &x in m {
                if !seen.insert(x) {
                    return Err(Error::NotDisjoint(x.to_string()));
                }
            }
        }
        Ok(OrdinalTupleFamily { arity, members })
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn members(&self) -> &[OrdSet] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

/// `bar-type(C, D)`: coordinate `i` is `0` iff the code of `C(i)` is
/// lexicographically below the code of `D(i)`.
pub fn bar_type(codes: &CodedFamily, c: &[Ordinal], d: &[Ordinal]) -> Result<ConfigType> {
    if c.len() != d.len() {
        return Err(Error::LengthMismatch {
            left: c.len(),
            right: d.len(),
        });
    }
    if let Some(x) = c.iter().find(|x| d.contains(x)) {
        return Err(Error::NotDisjoint(x.to_string()));
    }
    let domain = codes.points.len();
    if let Some(&x) = c.iter().chain(d).find(|&&x| x >= domain) {
        return Err(Error::OutOfDomain { ordinal: x, domain });
    }
    ConfigType::new(
        c.iter()
            .zip(d)
            .map(|(&a, &b)| u8::from(!codes.less(a, b)))
            .collect(),
    )
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SpectrumEntry {
    #[serde(serialize_with = "ser_display")]
    pub class: NormClass,
    /// Member indices `(i, j)` with `bar_type(M_i, M_j)` the class representative.
    pub witness: (usize, usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TypeSpectrum {
    pub arity: usize,
    pub members: usize,
    pub classes_total: u64,
    pub realized: Vec<SpectrumEntry>,
}

impl TypeSpectrum {
    pub fn contains(&self, class: &NormClass) -> bool {
        self.realized.iter().any(|e| &e.class == class)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!(
            "spectrum: arity {}, {} members, {} of {} classes realized\n",
            self.arity,
            self.members,
            self.realized.len(),
            self.classes_total
        );
        for e in &self.realized {
            let _ = writeln!(out, "  {}  via ({}, {})", e.class, e.witness.0, e.witness.1);
        }
        out
    }
}

/// Realized classes over all pairs of distinct members, each with the first
/// witness pair in `(i, j)` order, oriented so that it realizes the class
/// representative.
pub fn spectrum(codes: &CodedFamily, fam: &OrdinalTupleFamily) -> Result<TypeSpectrum> {
    if fam.len() < 2 {
        return Err(Error::Precondition(
            "a spectrum needs at least 2 members".into(),
        ));
    }
    let m = fam.members();
    let rows = par::flat_map_range(m.len(), |i| {
        let mut local: BTreeMap<NormClass, (usize, usize)> = BTreeMap::new();
        for j in i + 1..m.len() {
            let tau = bar_type(codes, &m[i], &m[j]).expect("family is disjoint");
            let class = norm_class(&tau);
            let w = if tau.get(0) == 0 { (i, j) } else { (j, i) };
            local.entry(class).or_insert(w);
        }
        vec![local]
    });
    let mut realized: BTreeMap<NormClass, (usize, usize)> = BTreeMap::new();
    for row in rows {
        for (c, w) in row {
            realized.entry(c).or_insert(w);
        }
    }
    Ok(TypeSpectrum {
        arity: fam.arity(),
        members: fam.len(),
        classes_total: 1u64 << (fam.arity() - 1).min(63),
        realized: realized
            .into_iter()
            .map(|(class, witness)| SpectrumEntry { class, witness })
            .collect(),
    })
}

/// Member-by-member bar types as CSV; the diagonal is `-`.
pub fn spectrum_matrix_csv(codes: &CodedFamily, fam: &OrdinalTupleFamily) -> Result<String> {
    let m = fam.members();
    let mut out = String::from("member");
    for j in 0..m.len() {
        let _ = write!(out, ",{j}");
    }
    out.push('\n');
    for i in 0..m.len() {
        let _ = write!(out, "{i}");
        for j in 0..m.len() {
            if i == j {
                out.push_str(",-");
            } else {
                let _ = write!(out, ",{}", bar_type(codes, &m[i], &m[j])?);
            }
        }
        out.push('\n');
    }
    Ok(out)
}

/// The member of `class` that the realization argument targets: at most
/// `n` zeros, and a leading zero when there are exactly `n`.
pub fn normalized(class: &NormClass, n: usize) -> Option<ConfigType> {
    let [a, b] = class.members();
    match (a.zeros() <= n, b.zeros() <= n) {
        (true, true) => Some(if a.get(0) == 0 { a } else { b }),
        (true, false) => Some(a),
        (false, true) => Some(b),
        (false, false) => None,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Realized {
    /// The index picked by the enumeration argument worked.
    Proof,
    /// Found by scanning all pairs of the family.
    Scan,
    Missing,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassOutcome {
    #[serde(serialize_with = "ser_display")]
    pub class: NormClass,
    pub how: Realized,
    /// Indices `(i, j)` with `bar_type(D_i, D_j)` equal to the class representative.
    pub witness: Option<(usize, usize)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FamilyRealization {
    pub level: usize,
    pub arity: usize,
    pub outcomes: Vec<ClassOutcome>,
}

impl FamilyRealization {
    pub fn missing(&self) -> Vec<&NormClass> {
        self.outcomes
            .iter()
            .filter(|o| o.how == Realized::Missing)
            .map(|o| &o.class)
            .collect()
    }
}

/// Check that a family Δ-captured at `level` realizes every class of its
/// arity under the `e` or `o` coding.
pub fn verify_realization(
    profile: &MetricProfile<'_>,
    en: &SubsetEnumeration,
    codes: &CodedFamily,
    family: &[OrdSet],
    level: usize,
) -> Result<FamilyRealization> {
    if codes.kind == CodeKind::Xi {
        return Err(Error::Precondition(
            "realization is stated for the e and o codings".into(),
        ));
    }
    check_capture(profile, family, level, CaptureKind::DeltaCaptured)?;
    let arity = family[0].len();
    let n = en.n();
    let mut outcomes = Vec::new();
    for class in NormClass::all(arity) {
        let rep = class.representative().clone();
        let orient =
            |i: usize, j: usize, tau: &ConfigType| if *tau == rep { (i, j) } else { (j, i) };
        let mut found = None;
        if let Some(tau) = normalized(&class, n) {
            let c: Vec<usize> = (0..arity)
                .filter(|&i| tau.get(i) == 0)
                .map(|i| profile.card(family[0][i], level - 1))
                .collect();
            if let Some(j) = en.index_of(level - 1, &c).filter(|&j| j < family.len()) {
                let got = bar_type(codes, &family[0], &family[j])?;
                if class.contains(&got) {
                    found = Some((Realized::Proof, orient(0, j, &got)));
                }
            }
        }
        if found.is_none() {
            'scan: for i in 0..family.len() {
                for j in i + 1..family.len() {
                    let got = bar_type(codes, &family[i], &family[j])?;
                    if class.contains(&got) {
                        found = Some((Realized::Scan, orient(i, j, &got)));
                        break 'scan;
                    }
                }
            }
        }
        let (how, witness) = match found {
            Some((how, w)) => (how, Some(w)),
            None => (Realized::Missing, None),
        };
        outcomes.push(ClassOutcome {
            class,
            how,
            witness,
        });
    }
    Ok(FamilyRealization {
        level,
        arity,
        outcomes,
    })
}

/// Start points `0, w, 2w, …` of the width-`w` intervals that fit the domain.
pub fn stepped_starts(domain: usize, width: usize) -> Vec<Ordinal> {
    if width == 0 {
        return Vec::new();
    }
    (0..domain / width).map(|i| i * width).collect()
}

/// Starts `offset, offset + w, …` of the width-`w` intervals that fit the domain.
pub fn stepped_starts_from(domain: usize, width: usize, offset: usize) -> Vec<Ordinal> {
    if width == 0 || offset + width > domain {
        return Vec::new();
    }
    (0..=(domain - offset - width) / width)
        .map(|i| offset + i * width)
        .collect()
}

/// Try every offset below `width` for the stepped start list and keep the
/// family whose matched cell is largest (ties to the smallest offset).
/// Returns the offset along with the family.
pub fn best_stepped_family(
    profile: &MetricProfile<'_>,
    width: usize,
) -> Result<(usize, IntervalFamily)> {
    let mut best: Option<(usize, IntervalFamily)> = None;
    for offset in 0..width {
        let starts = stepped_starts_from(profile.domain(), width, offset);
        if starts.is_empty() {
            break;
        }
        let fam = interval_family(profile, &starts, width)?;
        if best
            .as_ref()
            .is_none_or(|(_, b)| fam.matched().starts.len() > b.matched().starts.len())
        {
            best = Some((offset, fam));
        }
    }
    best.ok_or_else(|| Error::Precondition(format!("no interval of width {width} fits the domain")))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IntervalCell {
    /// `rho` of every interval in the cell.
    pub k: usize,
    /// `||gamma||_k` of every start point in the cell.
    pub a: usize,
    pub starts: Vec<Ordinal>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IntervalFamily {
    pub width: usize,
    pub cells: Vec<IntervalCell>,
    /// Index into `cells` of the matched cell.
    pub chosen: usize,
}

impl IntervalFamily {
    pub fn matched(&self) -> &IntervalCell {
        &self.cells[self.chosen]
    }

    pub fn members(&self) -> Vec<OrdSet> {
        self.matched()
            .starts
            .iter()
            .map(|&g| (g..g + self.width).collect())
            .collect()
    }

    pub fn tuple_family(&self) -> Result<OrdinalTupleFamily> {
        OrdinalTupleFamily::new(self.members())
    }
}

/// Intervals `[gamma, gamma + width)` grouped by `(rho of the interval,
/// ||gamma||_k)`; the largest group is the matched one, ties going to the
/// smallest `k` and then the smallest `a`.
pub fn interval_family(
    profile: &MetricProfile<'_>,
    starts: &[Ordinal],
    width: usize,
) -> Result<IntervalFamily> {
    if width == 0 || starts.is_empty() {
        return Err(Error::Precondition(
            "need a positive width and at least one start".into(),
        ));
    }
    let domain = profile.domain();
    let mut sorted = starts.to_vec();
    sorted.sort_unstable();
    for &g in &sorted {
        if g + width > domain {
            return Err(Error::OutOfDomain {
                ordinal: g + width - 1,
                domain,
            });
        }
    }
    if let Some(w) = sorted.windows(2).find(|w| w[0] + width > w[1]) {
        return Err(Error::NotDisjoint(format!(
            "intervals at {} and {} overlap",
            w[0], w[1]
        )));
    }
    let mut groups: BTreeMap<(usize, usize), Vec<Ordinal>> = BTreeMap::new();
    for &g in &sorted {
        let set: Vec<Ordinal> = (g..g + width).collect();
        let k = profile.rho_of_set(&set);
        groups.entry((k, profile.card(g, k))).or_default().push(g);
    }
    let cells: Vec<IntervalCell> = groups
        .into_iter()
        .map(|((k, a), starts)| IntervalCell { k, a, starts })
        .collect();
    // max_by_key keeps the last maximum, so scan in reverse to favor small (k, a)
    let chosen = (0..cells.len())
        .rev()
        .max_by_key(|&i| cells[i].starts.len())
        .expect("at least one cell");
    Ok(IntervalFamily {
        width,
        cells,
        chosen,
    })
}

/// Type of length `len` that is `0` at even and `1` at odd coordinates.
pub fn alternating_class(len: usize) -> NormClass {
    norm_class(&ConfigType::alternating(len))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AvoidanceReport {
    pub kind: CodeKind,
    pub width: usize,
    pub cell_k: usize,
    pub cell_a: usize,
    pub members: usize,
    pub cells: usize,
    #[serde(serialize_with = "ser_display")]
    pub alternating: NormClass,
    pub checks: Vec<Check>,
    pub spectrum: Option<TypeSpectrum>,
}

impl AvoidanceReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }

    pub fn pairs(&self) -> u64 {
        self.checks.first().map_or(0, |c| c.checked)
    }

    pub fn to_text(&self) -> String {
        let mut out = render_checks(
            &format!(
                "avoidance: {} coding, width {}, matched cell (k={}, a={}) with {} members out of {} cells; alternating class {}",
                self.kind, self.width, self.cell_k, self.cell_a, self.members, self.cells, self.alternating
            ),
            &self.checks,
        );
        if let Some(s) = &self.spectrum {
            out.push_str(&s.to_text());
        }
        out
    }
}

/// On the matched cell of an interval family: no pair realizes the
/// alternating class, and `Δ(gamma+i, delta+i) = Δ(gamma, delta)` for every
/// pair and shift.
pub fn verify_avoidance(
    profile: &MetricProfile<'_>,
    codes: &CodedFamily,
    fam: &IntervalFamily,
) -> Result<AvoidanceReport> {
    let cell = fam.matched();
    let w = fam.width;
    let alt = alternating_class(w);
    let starts = &cell.starts;
    let members = fam.members();
    let mut hits = Check::new("alternating class avoided");
    let mut shift = Check::new("shift invariance of Δ");
    for (x, &g) in starts.iter().enumerate() {
        for (y, &d) in starts.iter().enumerate().skip(x + 1) {
            let tau = bar_type(codes, &members[x], &members[y])?;
            hits.record(!alt.contains(&tau), || {
                format!("[{g},{}) vs [{d},{}) has type {tau}", g + w, d + w)
            });
            let base = profile.delta(g, d);
            for i in 0..w {
                let got = profile.delta(g + i, d + i);
                shift.record(got == base, || {
                    format!("Δ({},{}) = {got} but Δ({g},{d}) = {base}", g + i, d + i)
                });
            }
        }
    }
    let spectrum = if members.len() >= 2 {
        Some(spectrum(codes, &fam.tuple_family()?)?)
    } else {
        None
    };
    Ok(AvoidanceReport {
        kind: codes.kind,
        width: w,
        cell_k: cell.k,
        cell_a: cell.a,
        members: members.len(),
        cells: fam.cells.len(),
        alternating: alt,
        checks: vec![hits, shift],
        spectrum,
    })
}

/// Interval width used against each coding: one past the largest arity the
/// coding is expected to entangle.
pub fn avoidance_width(kind: CodeKind, n: usize) -> usize {
    match kind {
        CodeKind::E => 2 * n + 1,
        CodeKind::O => 2 * n + 2,
        CodeKind::Xi => 2,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IncreasingReport {
    pub arity: usize,
    pub members: usize,
    pub captured_pairs: usize,
    pub check: Check,
    pub coverage: Vec<SearchCoverage>,
}

impl IncreasingReport {
    pub fn passed(&self) -> bool {
        self.check.passed()
    }

    pub fn to_text(&self) -> String {
        let mut out = render_checks(
            &format!(
                "increasing: arity {}, {} members, {} Δ-captured pairs",
                self.arity, self.members, self.captured_pairs
            ),
            std::slice::from_ref(&self.check),
        );
        for c in &self.coverage {
            let _ = writeln!(
                out,
                "  level {} size {}: {} of {} tuples examined",
                c.level, c.size, c.examined, c.total
            );
        }
        out
    }
}

/// Every Δ-captured pair of members has constant bar type under the Xi
/// coding.
pub fn verify_increasing(
    profile: &MetricProfile<'_>,
    xi_codes: &CodedFamily,
    fam: &OrdinalTupleFamily,
    cap: usize,
    seed: u64,
) -> Result<IncreasingReport> {
    if xi_codes.kind != CodeKind::Xi {
        return Err(Error::Precondition(
            "the increasing check uses the Xi coding".into(),
        ));
    }
    let query = CaptureQuery {
        levels: Vec::new(),
        sizes: vec![2],
        kind: CaptureKind::DeltaCaptured,
        cap,
        seed,
    };
    let found = find_captures(profile, fam.members(), &query)?;
    let mut check = Check::new("constant bar type on Δ-captured pairs");
    for w in &found.witnesses {
        check_constant(xi_codes, w, &mut check)?;
    }
    Ok(IncreasingReport {
        arity: fam.arity(),
        members: fam.len(),
        captured_pairs: found.witnesses.len(),
        check,
        coverage: found.coverage,
    })
}

fn check_constant(codes: &CodedFamily, w: &CaptureWitness, check: &mut Check) -> Result<()> {
    let tau = bar_type(codes, &w.family[0], &w.family[1])?;
    check.record(tau.is_constant(), || {
        format!(
            "{:?} vs {:?} at level {} has type {tau}",
            w.family[0], w.family[1], w.level
        )
    });
    Ok(())
}

/// Realization over every canonical family of the given arity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RealizationSweep {
    pub kind: CodeKind,
    pub n: usize,
    pub arity: usize,
    pub levels: Vec<usize>,
    pub families: u64,
    pub by_proof: u64,
    pub by_scan: u64,
    pub checks: Vec<Check>,
}

impl RealizationSweep {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }

    pub fn to_text(&self) -> String {
        let mut out = render_checks(
            &format!(
                "realization: {} coding, n={}, arity {}, {} families at levels {:?}",
                self.kind, self.n, self.arity, self.families, self.levels
            ),
            &self.checks,
        );
        let _ = writeln!(
            out,
            "  realized by the enumeration index: {}, by scan: {}",
            self.by_proof, self.by_scan
        );
        out
    }
}

/// Run [`verify_realization`] on every canonical family of `arity`-tuples
/// at every level whose tail block is long enough.
pub fn realization_sweep(
    profile: &MetricProfile<'_>,
    en: &SubsetEnumeration,
    codes: &CodedFamily,
    arity: usize,
) -> Result<RealizationSweep> {
    let mut realized = Check::new("every class realized");
    let mut revalidated = Check::new("witnesses re-validate");
    let (mut families, mut by_proof, mut by_scan) = (0u64, 0u64, 0u64);
    let mut levels = Vec::new();
    for l in 1..=profile.rank() {
        let fams = crate::capture::canonical_tuple_families(profile, l, arity)?;
        if fams.is_empty() {
            continue;
        }
        levels.push(l);
        for f in fams {
            families += 1;
            let r = verify_realization(profile, en, codes, &f.family, l)?;
            for o in &r.outcomes {
                realized.record(o.how != Realized::Missing, || {
                    format!(
                        "level {l}, set {}, positions {:?}: class {} missing",
                        f.set_index, f.positions, o.class
                    )
                });
                match o.how {
                    Realized::Proof => by_proof += 1,
                    Realized::Scan => by_scan += 1,
                    Realized::Missing => {}
                }
                if let Some((i, j)) = o.witness {
                    let got = bar_type(codes, &f.family[i], &f.family[j])?;
                    revalidated.record(&got == o.class.representative(), || {
                        format!(
                            "level {l}: pair ({i},{j}) has type {got}, not {}",
                            o.class.representative()
                        )
                    });
                }
            }
        }
    }
    Ok(RealizationSweep {
        kind: codes.kind,
        n: en.n(),
        arity,
        levels,
        families,
        by_proof,
        by_scan,
        checks: vec![realized, revalidated],
    })
}

/// [`verify_increasing`] over every canonical family of `arity`-tuples.
pub fn increasing_sweep(
    profile: &MetricProfile<'_>,
    xi_codes: &CodedFamily,
    arity: usize,
    cap: usize,
    seed: u64,
) -> Result<IncreasingReport> {
    let mut check = Check::new("constant bar type on Δ-captured pairs");
    let (mut members, mut captured_pairs) = (0, 0);
    for l in 1..=profile.rank() {
        for f in crate::capture::canonical_tuple_families(profile, l, arity)? {
            let fam = OrdinalTupleFamily::new(f.family)?;
            let r = verify_increasing(profile, xi_codes, &fam, cap, seed)?;
            members += r.members;
            captured_pairs += r.captured_pairs;
            check.merge(&r.check);
        }
    }
    Ok(IncreasingReport {
        arity,
        members,
        captured_pairs,
        check,
        coverage: Vec::new(),
    })
}

/// The level that decides the order of two coded points.
pub fn deciding_level(codes: &CodedFamily, a: Ordinal, b: Ordinal) -> Delta {
    crate::scheme::seq_delta(codes.seq(a), codes.seq(b))
}
