//! Configuration types of pairs of disjoint increasing tuples, and the open
//! boxes that witness them.
//!
//! A configuration type of length `n` records, coordinate by coordinate,
//! whether the first tuple is below (`0`) or above (`1`) the second one.
//! Points are exact rationals so that every comparison is decided without
//! tolerances.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A function `n -> 2`, stored as a bit vector.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<u8>", into = "Vec<u8>")]
pub struct ConfigType(Vec<u8>);

impl ConfigType {
    pub fn new(bits: Vec<u8>) -> Result<Self> {
        if bits.is_empty() {
            return Err(Error::Precondition(
                "configuration type must have length >= 1".into(),
            ));
        }
        Self::from_bits(bits)
    }

    /// The length-0 sequence, the neutral element of [`concat`].
    pub fn empty() -> Self {
        ConfigType(Vec::new())
    }

    fn from_bits(bits: Vec<u8>) -> Result<Self> {
        if let Some(b) = bits.iter().find(|&&b| b > 1) {
            return Err(Error::Malformed(format!("type entry {b} is not a bit")));
        }
        Ok(ConfigType(bits))
    }

    pub fn from_fn(len: usize, f: impl Fn(usize) -> u8) -> Self {
        ConfigType((0..len).map(|i| f(i) & 1).collect())
    }

    /// All types of length `len`, in increasing binary order.
    pub fn all(len: usize) -> impl Iterator<Item = ConfigType> {
        assert!(len < usize::BITS as usize);
        (0usize..1 << len)
            .map(move |mask| ConfigType::from_fn(len, |i| ((mask >> (len - 1 - i)) & 1) as u8))
    }

    /// `0` on even coordinates, `1` on odd ones.
    pub fn alternating(len: usize) -> Self {
        ConfigType::from_fn(len, |i| (i % 2) as u8)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn bits(&self) -> &[u8] {
        &self.0
    }

    pub fn get(&self, i: usize) -> u8 {
        self.0[i]
    }

    pub fn zeros(&self) -> usize {
        self.0.iter().filter(|&&b| b == 0).count()
    }

    pub fn is_constant(&self) -> bool {
        self.0.windows(2).all(|w| w[0] == w[1])
    }

    pub fn flip(&self, i: u8) -> ConfigType {
        flip(self, i)
    }

    pub fn norm_class(&self) -> NormClass {
        norm_class(self)
    }
}

impl TryFrom<Vec<u8>> for ConfigType {
    type Error = Error;

    fn try_from(bits: Vec<u8>) -> Result<Self> {
        ConfigType::from_bits(bits)
    }
}

impl From<ConfigType> for Vec<u8> {
    fn from(t: ConfigType) -> Self {
        t.0
    }
}

impl fmt::Display for ConfigType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.0 {
            write!(f, "{b}")?;
        }
        Ok(())
    }
}

impl FromStr for ConfigType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bits = s
            .chars()
            .map(|c| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                _ => Err(Error::Malformed(format!("'{c}' is not a bit"))),
            })
            .collect::<Result<Vec<u8>>>()?;
        ConfigType::new(bits)
    }
}

/// `tau^i(j) = |i - tau(j)|`: the identity for `i = 0`, the complement for `i = 1`.
pub fn flip(tau: &ConfigType, i: u8) -> ConfigType {
    let i = i & 1;
    ConfigType(tau.0.iter().map(|&b| b ^ i).collect())
}

/// The unordered pair `{tau, complement(tau)}`.
///
/// Stored through its representative with a leading `0`, so equality of
/// classes is equality of representatives.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct NormClass(ConfigType);

impl NormClass {
    pub fn representative(&self) -> &ConfigType {
        &self.0
    }

    pub fn members(&self) -> [ConfigType; 2] {
        [self.0.clone(), flip(&self.0, 1)]
    }

    pub fn contains(&self, tau: &ConfigType) -> bool {
        norm_class(tau) == *self
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Every class of types of length `len` (there are `2^(len-1)` of them).
    pub fn all(len: usize) -> Vec<NormClass> {
        let mut v: Vec<NormClass> = ConfigType::all(len)
            .filter(|t| t.0.first() == Some(&0))
            .map(NormClass)
            .collect();
        v.sort();
        v
    }
}

impl fmt::Display for NormClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{},{}}}", self.0, flip(&self.0, 1))
    }
}

pub fn norm_class(tau: &ConfigType) -> NormClass {
    match tau.0.first() {
        Some(1) => NormClass(flip(tau, 1)),
        _ => NormClass(tau.clone()),
    }
}

/// `sigma0` followed by `sigma1`.
pub fn concat(sigma0: &ConfigType, sigma1: &ConfigType) -> ConfigType {
    let mut bits = Vec::with_capacity(sigma0.len() + sigma1.len());
    bits.extend_from_slice(&sigma0.0);
    bits.extend_from_slice(&sigma1.0);
    ConfigType(bits)
}

/// Exact rational point; serializes as a `"p/q"` string (`"p"` for integers).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Q(pub BigRational);

impl Q {
    pub fn new(numer: i64, denom: i64) -> Q {
        Q(BigRational::new(BigInt::from(numer), BigInt::from(denom)))
    }

    pub fn int(v: i64) -> Q {
        Q(BigRational::from_integer(BigInt::from(v)))
    }

    pub fn midpoint(&self, other: &Q) -> Q {
        let two = BigRational::from_integer(BigInt::from(2));
        Q((&self.0 + &other.0) / two)
    }
}

impl From<i64> for Q {
    fn from(v: i64) -> Self {
        Q::int(v)
    }
}

impl fmt::Display for Q {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl FromStr for Q {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let parse = |t: &str| {
            t.trim()
                .parse::<BigInt>()
                .map_err(|_| Error::Malformed(format!("bad rational '{s}'")))
        };
        match s.split_once('/') {
            Some((p, q)) => {
                let q = parse(q)?;
                if q.is_zero() {
                    return Err(Error::Malformed(format!("zero denominator in '{s}'")));
                }
                Ok(Q(BigRational::new(parse(p)?, q)))
            }
            None => Ok(Q(BigRational::from_integer(parse(s)?))),
        }
    }
}

impl Serialize for Q {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Q {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Q, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Int(i64),
            Str(String),
        }
        match Repr::deserialize(deserializer)? {
            Repr::Int(v) => Ok(Q::int(v)),
            Repr::Str(s) => s.parse().map_err(serde::de::Error::custom),
        }
    }
}

/// A strictly increasing finite sequence, identified with its enumeration
/// `a(0) < ... < a(n-1)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct Tuple<T>(Vec<T>);

impl<T: Ord> Tuple<T> {
    pub fn new(points: Vec<T>) -> Result<Self> {
        if points.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::NotIncreasing);
        }
        Ok(Tuple(points))
    }

    pub fn points(&self) -> &[T] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// True when the two tuples share no point.
    pub fn is_disjoint(&self, other: &Tuple<T>) -> bool {
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            match self.0[i].cmp(&other.0[j]) {
                Ordering::Less => i += 1,
                Ordering::Greater => j += 1,
                Ordering::Equal => return false,
            }
        }
        true
    }
}

impl Tuple<Q> {
    pub fn from_ints(v: &[i64]) -> Result<Self> {
        Tuple::new(v.iter().map(|&x| Q::int(x)).collect())
    }
}

impl<'de, T: Ord + Deserialize<'de>> Deserialize<'de> for Tuple<T> {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let v = Vec::<T>::deserialize(deserializer)?;
        Tuple::new(v).map_err(serde::de::Error::custom)
    }
}

/// Coordinatewise comparison of two equal-length sequences:
/// `0` where `a(i) < b(i)`, `1` where `a(i) > b(i)`.
///
/// Unlike [`type_of`] the inputs need not be increasing; only coordinate
/// collisions are rejected.
pub fn coordinate_type<T: Ord + fmt::Debug>(a: &[T], b: &[T]) -> Result<ConfigType> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    a.iter()
        .zip(b)
        .map(|(x, y)| match x.cmp(y) {
            Ordering::Less => Ok(0),
            Ordering::Greater => Ok(1),
            Ordering::Equal => Err(Error::NotDisjoint(format!("{x:?}"))),
        })
        .collect::<Result<Vec<u8>>>()
        .map(ConfigType)
}

/// `type(a, b)` for disjoint tuples of the same length.
pub fn type_of<T: Ord + fmt::Debug>(a: &Tuple<T>, b: &Tuple<T>) -> Result<ConfigType> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    if let Some(p) = a.0.iter().find(|p| b.0.binary_search(p).is_ok()) {
        return Err(Error::NotDisjoint(format!("{p:?}")));
    }
    coordinate_type(&a.0, &b.0)
}

/// Open interval `(lo, hi)` with `lo < hi`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Interval {
    pub lo: Q,
    pub hi: Q,
}

impl Interval {
    pub fn new(lo: Q, hi: Q) -> Result<Self> {
        if lo >= hi {
            return Err(Error::InvalidBox(format!("empty interval ({lo}, {hi})")));
        }
        Ok(Interval { lo, hi })
    }

    pub fn contains(&self, x: &Q) -> bool {
        self.lo < *x && *x < self.hi
    }

    pub fn meets(&self, other: &Interval) -> bool {
        self.lo < other.hi && other.lo < self.hi
    }
}

/// The basic open set `U_0 (x) ... (x) U_{n-1}` of `[R]^n`: pairwise disjoint
/// open intervals, kept sorted so that the `i`-th interval carries the `i`-th
/// smallest point of every member.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct OpenBox(Vec<Interval>);

impl OpenBox {
    pub fn new(mut intervals: Vec<Interval>) -> Result<Self> {
        intervals.sort_by(|a, b| a.lo.cmp(&b.lo));
        if intervals.windows(2).any(|w| w[0].hi > w[1].lo) {
            return Err(Error::InvalidBox("intervals overlap".into()));
        }
        Ok(OpenBox(intervals))
    }

    pub fn intervals(&self) -> &[Interval] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, t: &Tuple<Q>) -> bool {
        t.len() == self.len() && self.0.iter().zip(t.points()).all(|(u, x)| u.contains(x))
    }
}

impl<'de> Deserialize<'de> for OpenBox {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let v = Vec::<Interval>::deserialize(deserializer)?;
        for iv in &v {
            if iv.lo >= iv.hi {
                return Err(serde::de::Error::custom("empty interval"));
            }
        }
        OpenBox::new(v).map_err(serde::de::Error::custom)
    }
}

/// Open boxes `U ∋ a`, `V ∋ b` with `⋃U ∩ ⋃V = ∅` on which the type is
/// constantly `type_of(a, b)`.
///
/// Every point gets the cell between the midpoints to its neighbours in the
/// merged order; the outermost cells are made symmetric around their point.
pub fn separate(a: &Tuple<Q>, b: &Tuple<Q>) -> Result<(OpenBox, OpenBox)> {
    type_of(a, b)?;
    let mut all: Vec<(&Q, bool)> =
        a.0.iter()
            .map(|p| (p, true))
            .chain(b.0.iter().map(|p| (p, false)))
            .collect();
    all.sort_by(|x, y| x.0.cmp(y.0));
    if all.is_empty() {
        return Ok((OpenBox(vec![]), OpenBox(vec![])));
    }
    let cuts: Vec<Q> = all.windows(2).map(|w| w[0].0.midpoint(w[1].0)).collect();
    let last = all.len() - 1;
    let half_one = Q(BigRational::new(BigInt::one(), BigInt::from(2)));
    let (mut u, mut v) = (Vec::new(), Vec::new());
    for (idx, (p, in_a)) in all.iter().enumerate() {
        let lo = if idx == 0 {
            match cuts.first() {
                Some(c) => Q(&p.0 - (&c.0 - &p.0)),
                None => Q(&p.0 - &half_one.0),
            }
        } else {
            cuts[idx - 1].clone()
        };
        let hi = if idx == last {
            match cuts.last() {
                Some(c) => Q(&p.0 + (&p.0 - &c.0)),
                None => Q(&p.0 + &half_one.0),
            }
        } else {
            cuts[idx].clone()
        };
        let iv = Interval::new(lo, hi)?;
        if *in_a {
            u.push(iv);
        } else {
            v.push(iv);
        }
    }
    Ok((OpenBox::new(u)?, OpenBox::new(v)?))
}

/// `type(U, V)` when it is defined: equal lengths, disjoint unions, and then
/// each coordinate pair of intervals is separated.
pub fn type_of_boxes(u: &OpenBox, v: &OpenBox) -> Option<ConfigType> {
    if u.len() != v.len() {
        return None;
    }
    if u.0.iter().any(|x| v.0.iter().any(|y| x.meets(y))) {
        return None;
    }
    u.0.iter()
        .zip(&v.0)
        .map(|(x, y)| {
            if x.hi <= y.lo {
                Some(0)
            } else if x.lo >= y.hi {
                Some(1)
            } else {
                None
            }
        })
        .collect::<Option<Vec<u8>>>()
        .map(ConfigType)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn t(bits: &[u8]) -> ConfigType {
        ConfigType::new(bits.to_vec()).unwrap()
    }

    fn q(v: &[i64]) -> Tuple<Q> {
        Tuple::from_ints(v).unwrap()
    }

    #[test]
    fn type_of_examples() {
        assert_eq!(type_of(&q(&[1, 4]), &q(&[2, 3])).unwrap(), t(&[0, 1]));
        assert_eq!(type_of(&q(&[1, 2]), &q(&[3, 4])).unwrap(), t(&[0, 0]));
    }

    #[test]
    fn type_of_errors() {
        assert!(matches!(
            type_of(&q(&[1, 2]), &q(&[2, 3])),
            Err(Error::NotDisjoint(_))
        ));
        assert!(matches!(
            type_of(&q(&[1]), &q(&[2, 3])),
            Err(Error::LengthMismatch { .. })
        ));
        // shared point in different coordinates is still a collision
        assert!(matches!(
            type_of(&q(&[1, 5]), &q(&[5, 7])),
            Err(Error::NotDisjoint(_))
        ));
    }

    #[test]
    fn flip_examples() {
        assert_eq!(flip(&t(&[0, 1, 0]), 1), t(&[1, 0, 1]));
        assert_eq!(flip(&t(&[0, 1, 0]), 0), t(&[0, 1, 0]));
        for len in 1..=4 {
            for tau in ConfigType::all(len) {
                assert_eq!(flip(&flip(&tau, 1), 1), tau);
                assert_eq!(flip(&tau, 0), tau);
            }
        }
    }

    #[test]
    fn norm_class_examples() {
        let c = norm_class(&t(&[0, 1]));
        let mut members = c.members().to_vec();
        members.sort();
        assert_eq!(members, vec![t(&[0, 1]), t(&[1, 0])]);
        assert_eq!(norm_class(&t(&[0, 0])), norm_class(&t(&[1, 1])));
        assert_ne!(norm_class(&t(&[0, 1])), norm_class(&t(&[0, 0])));
    }

    #[test]
    fn class_count_is_half_of_types() {
        for n in 1..=5usize {
            let distinct: std::collections::BTreeSet<_> =
                ConfigType::all(n).map(|x| norm_class(&x)).collect();
            assert_eq!(distinct.len(), 1 << (n - 1));
            assert_eq!(NormClass::all(n).len(), 1 << (n - 1));
        }
    }

    #[test]
    fn concat_examples() {
        assert_eq!(concat(&t(&[0]), &t(&[1, 1])), t(&[0, 1, 1]));
        let e = ConfigType::empty();
        assert_eq!(concat(&e, &t(&[1, 0])), t(&[1, 0]));
        assert_eq!(concat(&t(&[1, 0]), &e), t(&[1, 0]));
        let short: Vec<ConfigType> = (1..=3)
            .flat_map(ConfigType::all)
            .chain([ConfigType::empty()])
            .collect();
        for a in &short {
            for b in &short {
                for c in &short {
                    assert_eq!(concat(&concat(a, b), c), concat(a, &concat(b, c)));
                }
            }
        }
    }

    #[test]
    fn separate_matches_worked_example() {
        let (u, v) = separate(&q(&[1, 4]), &q(&[2, 3])).unwrap();
        let iv = |lo: (i64, i64), hi: (i64, i64)| {
            Interval::new(Q::new(lo.0, lo.1), Q::new(hi.0, hi.1)).unwrap()
        };
        assert_eq!(u.intervals(), &[iv((1, 2), (3, 2)), iv((7, 2), (9, 2))]);
        assert_eq!(v.intervals(), &[iv((3, 2), (5, 2)), iv((5, 2), (7, 2))]);
        let (u, v) = separate(&q(&[0]), &q(&[1])).unwrap();
        assert_eq!(u.intervals(), &[iv((-1, 2), (1, 2))]);
        assert_eq!(v.intervals(), &[iv((1, 2), (3, 2))]);
    }

    #[test]
    fn type_of_boxes_examples() {
        let b =
            |lo, hi| OpenBox::new(vec![Interval::new(Q::int(lo), Q::int(hi)).unwrap()]).unwrap();
        assert_eq!(type_of_boxes(&b(0, 1), &b(2, 3)), Some(t(&[0])));
        assert_eq!(type_of_boxes(&b(0, 2), &b(1, 3)), None);
    }

    #[test]
    fn rationals_serialize_as_strings() {
        let tup = Tuple::new(vec![Q::new(1, 2), Q::int(3)]).unwrap();
        let s = serde_json::to_string(&tup).unwrap();
        assert_eq!(s, r#"["1/2","3"]"#);
        let back: Tuple<Q> = serde_json::from_str(r#"["1/2", 3]"#).unwrap();
        assert_eq!(back, tup);
        assert!(serde_json::from_str::<Tuple<Q>>(r#"["3","1/2"]"#).is_err());
        assert_eq!(serde_json::to_string(&t(&[0, 1])).unwrap(), "[0,1]");
        assert!(serde_json::from_str::<ConfigType>("[0,2]").is_err());
    }

    /// Corner and interior samples of a box pair.
    fn samples(b: &OpenBox, denom: i64) -> Vec<Vec<Q>> {
        // one sample per "shape": all points near lo, all near hi, all central
        let eps = Q::new(1, denom);
        let near = |iv: &Interval, which: u8| match which {
            0 => Q(&iv.lo.0 + &eps.0),
            1 => Q(&iv.hi.0 - &eps.0),
            _ => iv.lo.midpoint(&iv.hi),
        };
        let n = b.len();
        let mut out = Vec::new();
        for pattern in 0..3usize.pow(n.min(4) as u32) {
            let mut p = pattern;
            out.push(
                b.intervals()
                    .iter()
                    .map(|iv| {
                        let w = (p % 3) as u8;
                        p /= 3;
                        near(iv, w)
                    })
                    .collect(),
            );
        }
        out
    }

    fn disjoint_pair() -> impl Strategy<Value = (Tuple<Q>, Tuple<Q>)> {
        (1usize..5).prop_flat_map(|n| {
            (
                proptest::collection::btree_set(-50i64..50, 2 * n),
                proptest::collection::vec(any::<bool>(), 2 * n),
            )
                .prop_map(move |(pts, coin)| {
                    // split 2n distinct points into two n-tuples by a shuffle-like coin walk
                    let pts: Vec<i64> = pts.into_iter().collect();
                    let mut idx: Vec<usize> = (0..pts.len()).collect();
                    idx.sort_by_key(|&i| (coin[i], i));
                    let mut a: Vec<i64> = idx[..n].iter().map(|&i| pts[i]).collect();
                    let mut b: Vec<i64> = idx[n..].iter().map(|&i| pts[i]).collect();
                    a.sort();
                    b.sort();
                    (Tuple::from_ints(&a).unwrap(), Tuple::from_ints(&b).unwrap())
                })
        })
    }

    proptest! {
        #[test]
        fn antisymmetry((a, b) in disjoint_pair()) {
            let ab = type_of(&a, &b).unwrap();
            let ba = type_of(&b, &a).unwrap();
            prop_assert_eq!(&ab, &flip(&ba, 1));
            prop_assert_eq!(norm_class(&ab), norm_class(&ba));
            // oracle: direct coordinate comparison
            for i in 0..a.len() {
                prop_assert_eq!(ab.get(i) == 0, a.points()[i] < b.points()[i]);
            }
        }

        #[test]
        fn separation_is_sound((a, b) in disjoint_pair()) {
            let tau = type_of(&a, &b).unwrap();
            let (u, v) = separate(&a, &b).unwrap();
            prop_assert!(u.contains(&a));
            prop_assert!(v.contains(&b));
            prop_assert_eq!(type_of_boxes(&u, &v), Some(tau.clone()));
            for su in samples(&u, 1000) {
                for sv in samples(&v, 997) {
                    let x = Tuple::new(su.clone()).unwrap();
                    let y = Tuple::new(sv.clone()).unwrap();
                    prop_assert_eq!(type_of(&x, &y).unwrap(), tau.clone());
                }
            }
        }

        #[test]
        fn concatenation_matches_blockwise_types(
            (a0, b0) in disjoint_pair(),
            (a1, b1) in disjoint_pair(),
        ) {
            // shift the second block above the first
            let shift = |t: &Tuple<Q>| Tuple::new(t.points().iter().map(|p| Q(&p.0 + BigRational::from_integer(BigInt::from(1000)))).collect()).unwrap();
            let (a1, b1) = (shift(&a1), shift(&b1));
            let a = Tuple::new(a0.points().iter().chain(a1.points()).cloned().collect()).unwrap();
            let b = Tuple::new(b0.points().iter().chain(b1.points()).cloned().collect()).unwrap();
            prop_assert_eq!(
                type_of(&a, &b).unwrap(),
                concat(&type_of(&a0, &b0).unwrap(), &type_of(&a1, &b1).unwrap())
            );
        }
    }
}
