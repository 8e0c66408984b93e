//! χ maps: the scalar-valued functions on ordered independent tuples that
//! define a χ-algebra, together with the commutation table β of the ambient
//! algebra.
//!
//! A [`ChiMap`] remembers the matroid it lives on (possibly a minor) and how
//! it was derived from a base map: deletions restrict, contractions append
//! the contracted elements to every tuple before the base map is evaluated.
//! Base values on sorted independent sets are tabulated when the map is
//! built (for small ground sets); everything else is derived on demand.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use num_traits::{One, Signed, Zero};
use serde::Deserialize;

use crate::algebra::{boundary, multiply, AlgebraElement};
use crate::arrangement::{Arrangement, FlatBasisPolicy};
use crate::error::{Error, Result};
use crate::linalg::{self, Scalar};
use crate::matroid::Matroid;
use crate::set::{ElementSet, OrderedTuple};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ChiKind {
    /// `χ(I^σ) = sgn(σ)`, exterior algebra.
    OrlikSolomon,
    /// Determinant in a basis of the flat spanned by `I`, commutative algebra.
    OrlikTerao,
    /// Sign of the Orlik-Terao value, commutative algebra.
    OrientedSign,
}

impl ChiKind {
    pub fn name(self) -> &'static str {
        match self {
            ChiKind::OrlikSolomon => "os",
            ChiKind::OrlikTerao => "ot",
            ChiKind::OrientedSign => "sign",
        }
    }
}

/// Table of the commutation scalars `β_{i,j}` (`i < j`) in
/// `e_j e_i = β_{i,j} e_i e_j`. All entries are nonzero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Beta {
    default: Scalar,
    overrides: BTreeMap<(usize, usize), Scalar>,
}

impl Beta {
    pub fn constant(value: Scalar) -> Result<Self> {
        if value.is_zero() {
            return Err(Error::InvalidBeta("β must be nonzero".into()));
        }
        Ok(Beta {
            default: value,
            overrides: BTreeMap::new(),
        })
    }

    /// `β ≡ -1`: the exterior algebra.
    pub fn exterior() -> Self {
        Beta::constant(-Scalar::one()).unwrap()
    }

    /// `β ≡ +1`: the commutative algebra with zero squares.
    pub fn commutative() -> Self {
        Beta::constant(Scalar::one()).unwrap()
    }

    pub fn with_entry(mut self, i: usize, j: usize, value: Scalar) -> Result<Self> {
        if i >= j {
            return Err(Error::InvalidBeta(format!("entry ({i},{j}) needs i < j")));
        }
        if value.is_zero() {
            return Err(Error::InvalidBeta(format!("entry ({i},{j}) is zero")));
        }
        self.overrides.insert((i, j), value);
        Ok(self)
    }

    /// `β_{i,j}` for `i < j`.
    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        debug_assert!(i < j);
        self.overrides.get(&(i, j)).unwrap_or(&self.default)
    }

    pub fn is_constant(&self) -> bool {
        self.overrides.values().all(|v| *v == self.default)
    }
}

/// The `beta` section of an algebra config file:
/// `{"beta": {"1,2": "-1", "2,5": "3/2"}}`.
#[derive(Debug, Default, Deserialize)]
pub struct AlgebraConfig {
    #[serde(default)]
    pub beta: BTreeMap<String, String>,
}

impl AlgebraConfig {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse {
            context: format!("line {} column {}", e.line(), e.column()),
            message: e.to_string(),
        })
    }

    pub fn apply(&self, mut beta: Beta) -> Result<Beta> {
        for (key, value) in &self.beta {
            let ctx = || format!("beta.{key}");
            let (i, j) = key.split_once(',').ok_or_else(|| Error::Parse {
                context: ctx(),
                message: "keys look like \"i,j\"".into(),
            })?;
            let parse = |s: &str| {
                s.trim().parse::<usize>().map_err(|_| Error::Parse {
                    context: ctx(),
                    message: format!("bad element {s:?}"),
                })
            };
            let v = linalg::parse_scalar(value).map_err(|e| match e {
                Error::Parse { message, .. } => Error::Parse {
                    context: ctx(),
                    message,
                },
                other => other,
            })?;
            beta = beta.with_entry(parse(i)?, parse(j)?, v)?;
        }
        Ok(beta)
    }
}

#[derive(Debug)]
struct ChiBase {
    kind: ChiKind,
    matroid: Matroid,
    arrangement: Option<Arrangement>,
    policy: FlatBasisPolicy,
    /// Per-flat rescaling of the base values, keyed by flats of `matroid`.
    flat_scale: BTreeMap<ElementSet, Scalar>,
    /// Replaced base values for individual sorted sets.
    set_values: BTreeMap<ElementSet, Scalar>,
    /// `raw_value` on every independent set, filled by `tabulate`.
    table: HashMap<ElementSet, Scalar>,
}

/// Ground sets up to this size get a value table.
const TABULATE_UP_TO: usize = 16;

impl ChiBase {
    fn new(
        kind: ChiKind,
        matroid: Matroid,
        arrangement: Option<Arrangement>,
        policy: FlatBasisPolicy,
    ) -> Self {
        ChiBase {
            kind,
            matroid,
            arrangement,
            policy,
            flat_scale: BTreeMap::new(),
            set_values: BTreeMap::new(),
            table: HashMap::new(),
        }
    }

    fn tabulate(mut self) -> Self {
        self.table.clear();
        if self.matroid.size() <= TABULATE_UP_TO {
            let table = self
                .matroid
                .ground()
                .subsets()
                .filter(|&s| self.matroid.independent(s))
                .map(|s| (s, self.raw_value(s)))
                .collect();
            self.table = table;
        }
        self
    }

    fn value(&self, set: ElementSet) -> Scalar {
        match self.table.get(&set) {
            Some(v) => v.clone(),
            None => self.raw_value(set),
        }
    }

    /// Value on a sorted independent set of the base matroid.
    fn raw_value(&self, set: ElementSet) -> Scalar {
        if let Some(v) = self.set_values.get(&set) {
            return v.clone();
        }
        let raw = match self.kind {
            ChiKind::OrlikSolomon => Scalar::one(),
            ChiKind::OrlikTerao | ChiKind::OrientedSign => {
                let a = self.arrangement.as_ref().expect("realized χ map");
                let det = a.det_with_policy(&OrderedTuple::sorted(set), self.policy);
                if self.kind == ChiKind::OrientedSign {
                    linalg::int(linalg::sign(&det) as i64)
                } else {
                    det
                }
            }
        };
        if self.flat_scale.is_empty() {
            raw
        } else {
            match self.flat_scale.get(&self.matroid.cl(set)) {
                Some(f) => raw * f,
                None => raw,
            }
        }
    }
}

/// A χ map on a (minor of a) matroid, plus its commutation table.
#[derive(Clone, Debug)]
pub struct ChiMap {
    base: Arc<ChiBase>,
    matroid: Matroid,
    /// Contracted elements, most recent first: `χ(T) = base(T * suffix)`.
    suffix: Vec<usize>,
    beta: Arc<Beta>,
}

impl ChiMap {
    fn from_base(base: ChiBase, beta: Beta) -> Self {
        let base = base.tabulate();
        ChiMap {
            matroid: base.matroid.clone(),
            base: Arc::new(base),
            suffix: Vec::new(),
            beta: Arc::new(beta),
        }
    }

    /// Orlik-Solomon χ on `m`: `χ(I^σ) = sgn(σ)`, `β ≡ -1`.
    pub fn orlik_solomon(m: &Matroid) -> Self {
        ChiMap::from_base(
            ChiBase::new(
                ChiKind::OrlikSolomon,
                m.clone(),
                None,
                FlatBasisPolicy::default(),
            ),
            Beta::exterior(),
        )
    }

    /// Orlik-Terao χ: determinant in the flat basis, `β ≡ +1`.
    pub fn orlik_terao(a: &Arrangement) -> Result<Self> {
        ChiMap::realized(ChiKind::OrlikTerao, a, FlatBasisPolicy::default())
    }

    /// Sign χ of the realized oriented matroid, `β ≡ +1`.
    pub fn oriented_sign(a: &Arrangement) -> Result<Self> {
        ChiMap::realized(ChiKind::OrientedSign, a, FlatBasisPolicy::default())
    }

    pub fn realized(kind: ChiKind, a: &Arrangement, policy: FlatBasisPolicy) -> Result<Self> {
        let m = a.matroid();
        if kind == ChiKind::OrlikSolomon {
            return Ok(ChiMap::orlik_solomon(&m));
        }
        Ok(ChiMap::from_base(
            ChiBase::new(kind, m, Some(a.clone()), policy),
            Beta::commutative(),
        ))
    }

    pub fn kind(&self) -> ChiKind {
        self.base.kind
    }

    pub fn matroid(&self) -> &Matroid {
        &self.matroid
    }

    pub fn beta(&self) -> &Beta {
        &self.beta
    }

    /// Elements contracted so far, in the order they are appended to tuples.
    pub fn contracted(&self) -> &[usize] {
        &self.suffix
    }

    pub fn with_beta(mut self, beta: Beta) -> Self {
        self.beta = Arc::new(beta);
        self
    }

    fn rebase(&self, f: impl FnOnce(&mut ChiBase)) -> Result<Self> {
        if !self.suffix.is_empty() || self.matroid != self.base.matroid {
            return Err(Error::Invalid(
                "base values can only be changed before taking minors".into(),
            ));
        }
        let mut base = ChiBase {
            kind: self.base.kind,
            matroid: self.base.matroid.clone(),
            arrangement: self.base.arrangement.clone(),
            policy: self.base.policy,
            flat_scale: self.base.flat_scale.clone(),
            set_values: self.base.set_values.clone(),
            table: HashMap::new(),
        };
        f(&mut base);
        let base = base.tabulate();
        Ok(ChiMap {
            matroid: base.matroid.clone(),
            base: Arc::new(base),
            suffix: Vec::new(),
            beta: self.beta.clone(),
        })
    }

    /// Multiplies every value on sets spanning the flat `flat` by `factor`.
    /// This is what a change of the chosen basis of that flat does.
    pub fn with_flat_scale(&self, flat: ElementSet, factor: Scalar) -> Result<Self> {
        if factor.is_zero() {
            return Err(Error::Invalid("flat scale must be nonzero".into()));
        }
        if self.kind() == ChiKind::OrientedSign && factor.abs() != Scalar::one() {
            return Err(Error::Invalid("sign maps only allow ±1 rescaling".into()));
        }
        if !self.matroid.is_flat(flat)? {
            return Err(Error::NotAFlat(flat));
        }
        self.rebase(|b| {
            let entry = b.flat_scale.entry(flat).or_insert_with(Scalar::one);
            *entry *= factor;
        })
    }

    /// Overrides the value on one sorted set. Used to build arbitrary maps,
    /// including ones that break the χ-algebra axioms.
    pub fn with_set_value(&self, set: ElementSet, value: Scalar) -> Result<Self> {
        if !set.is_subset(self.matroid.ground()) {
            return Err(Error::NotInGround {
                set,
                ground: self.matroid.ground(),
            });
        }
        self.rebase(|b| {
            b.set_values.insert(set, value);
        })
    }

    /// `χ(t)`: zero on dependent supports, otherwise the sign of the
    /// permutation sorting `t * contracted` times the base value.
    pub fn eval(&self, t: &OrderedTuple) -> Scalar {
        let support = t.support();
        if !self.matroid.independent(support) {
            return Scalar::zero();
        }
        let mut full: Vec<usize> = t.entries().to_vec();
        full.extend_from_slice(&self.suffix);
        let sign = crate::set::permutation_sign(&full);
        let set: ElementSet = full.iter().copied().collect();
        let v = self.base.value(set);
        if sign < 0 {
            -v
        } else {
            v
        }
    }

    /// `χ` on the increasing enumeration of `set`.
    pub fn eval_set(&self, set: ElementSet) -> Scalar {
        self.eval(&OrderedTuple::sorted(set))
    }

    /// The induced map on `M \ x`: same values on subsets avoiding `x`.
    pub fn delete(&self, x: usize) -> Result<Self> {
        Ok(ChiMap {
            base: self.base.clone(),
            matroid: self.matroid.delete(x)?,
            suffix: self.suffix.clone(),
            beta: self.beta.clone(),
        })
    }

    /// The induced map on `M / x`: `χ'(I) = χ(I * x)`.
    pub fn contract(&self, x: usize) -> Result<Self> {
        let matroid = self.matroid.contract(x)?;
        let mut suffix = Vec::with_capacity(self.suffix.len() + 1);
        suffix.push(x);
        suffix.extend_from_slice(&self.suffix);
        Ok(ChiMap {
            base: self.base.clone(),
            matroid,
            suffix,
            beta: self.beta.clone(),
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Uc1Violation {
    pub set: ElementSet,
    pub independent: bool,
    pub value: Scalar,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Uc2Violation {
    pub outer: ElementSet,
    pub inner: ElementSet,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct UcReport {
    pub subsets_checked: usize,
    pub pairs_checked: usize,
    pub uc1: Vec<Uc1Violation>,
    pub uc2: Vec<Uc2Violation>,
}

impl UcReport {
    pub fn is_ok(&self) -> bool {
        self.uc1.is_empty() && self.uc2.is_empty()
    }
}

/// Exhaustively checks the two axioms of a χ-algebra:
///
/// * UC1: `χ(X) ≠ 0` exactly when `X` is independent;
/// * UC2: for unidependents `U' ⊂ U` there is `ε ≠ 0` with
///   `∂e_U = ε (∂e_{U'}) e_{U \ U'}` in the free algebra.
///
/// Enumerates every subset of the ground set, so keep the ground set small.
pub fn verify_uc(chi: &ChiMap) -> UcReport {
    let m = chi.matroid();
    let mut report = UcReport::default();
    let mut unidependents = Vec::new();
    for x in m.ground().subsets() {
        report.subsets_checked += 1;
        let independent = m.independent(x);
        let value = chi.eval_set(x);
        if independent == value.is_zero() {
            report.uc1.push(Uc1Violation {
                set: x,
                independent,
                value,
            });
        }
        if m.is_unidependent(x) {
            unidependents.push(x);
        }
    }
    let uni: std::collections::BTreeSet<ElementSet> = unidependents.iter().copied().collect();
    for &u in &unidependents {
        let lhs = boundary(chi, u);
        for inner in u.subsets() {
            if inner == u || !uni.contains(&inner) {
                continue;
            }
            report.pairs_checked += 1;
            let rhs = multiply(
                chi,
                &boundary(chi, inner),
                &AlgebraElement::monomial(u.difference(inner)),
            );
            if proportional(&lhs, &rhs).is_none() {
                report.uc2.push(Uc2Violation { outer: u, inner });
            }
        }
    }
    report
}

/// The nonzero `ε` with `a = ε b`, if it exists.
pub fn proportional(a: &AlgebraElement, b: &AlgebraElement) -> Option<Scalar> {
    if a.len() != b.len() || a.is_zero() {
        return None;
    }
    let mut eps: Option<Scalar> = None;
    for (s, ca) in a.iter() {
        let cb = b.coeff(s)?;
        let r = ca / cb;
        match &eps {
            None => eps = Some(r),
            Some(e) if *e == r => {}
            Some(_) => return None,
        }
    }
    eps
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arrangement::parse_arrangement;
    use crate::linalg::{frac, int};

    const FIG1: &str = include_str!("../../../data/fig1.json");

    fn t(v: &[usize]) -> OrderedTuple {
        OrderedTuple::new(v.to_vec()).unwrap()
    }

    fn fig1() -> Arrangement {
        parse_arrangement(FIG1).unwrap()
    }

    #[test]
    fn orlik_solomon_values() {
        let chi = ChiMap::orlik_solomon(&fig1().matroid());
        assert_eq!(chi.eval(&t(&[1, 2, 4])), int(1));
        assert_eq!(chi.eval(&t(&[3, 2, 5])), int(-1));
        assert_eq!(chi.eval(&t(&[1, 2, 3])), int(0));
        assert_eq!(chi.eval(&t(&[])), int(1));
        assert_eq!(chi.beta().get(1, 2), &int(-1));
    }

    #[test]
    fn orlik_terao_values() {
        let a = fig1();
        let ot = ChiMap::orlik_terao(&a).unwrap();
        assert_eq!(ot.eval(&t(&[1, 3, 5])) / ot.eval(&t(&[2, 3, 5])), int(2));
        assert_eq!(ot.eval(&t(&[4])), int(1));
        assert_eq!(ot.eval(&t(&[2, 3, 5])), int(2));
        assert_eq!(ot.beta().get(2, 5), &int(1));
        // With ambient coordinates on the full flat the values are the plain
        // determinants of the vectors.
        let plain =
            ChiMap::realized(ChiKind::OrlikTerao, &a, FlatBasisPolicy::AmbientWhenFull).unwrap();
        assert_eq!(plain.eval(&t(&[2, 3, 5])), frac(-1, 2));
        assert_eq!(plain.eval(&t(&[1, 2, 5])), frac(-1, 2));
        assert_eq!(plain.eval(&t(&[1, 3, 5])), int(-1));
    }

    #[test]
    fn sign_values() {
        let a = fig1();
        let plain =
            ChiMap::realized(ChiKind::OrientedSign, &a, FlatBasisPolicy::AmbientWhenFull).unwrap();
        assert_eq!(plain.eval(&t(&[1, 2, 5])), int(-1));
        assert_eq!(plain.eval(&t(&[3, 2, 5])), int(1));
        let sign = ChiMap::oriented_sign(&a).unwrap();
        let ot = ChiMap::orlik_terao(&a).unwrap();
        for s in a.ground().subsets() {
            let v = sign.eval_set(s);
            assert!(v.is_zero() || v.abs().is_one());
            assert_eq!(linalg::sign(&v), linalg::sign(&ot.eval_set(s)));
        }
        assert_eq!(sign.eval(&t(&[1, 2, 3])), int(0));
    }

    #[test]
    fn alternating_rule() {
        let ot = ChiMap::orlik_terao(&fig1()).unwrap();
        use itertools::Itertools;
        for s in fig1().ground().combinations(3) {
            let sorted = ot.eval_set(s);
            for p in s.to_vec().into_iter().permutations(3) {
                let tp = OrderedTuple::new(p).unwrap();
                assert_eq!(ot.eval(&tp), sorted.clone() * int(tp.sign() as i64));
            }
        }
    }

    #[test]
    fn minors() {
        let plain = ChiMap::realized(
            ChiKind::OrlikTerao,
            &fig1(),
            FlatBasisPolicy::AmbientWhenFull,
        )
        .unwrap();
        let del = plain.delete(6).unwrap();
        assert_eq!(del.eval(&t(&[1, 2, 5])), frac(-1, 2));
        let c = plain.contract(5).unwrap().contract(3).unwrap();
        assert_eq!(c.contracted(), &[3, 5]);
        assert_eq!(c.eval(&t(&[1])), int(-1));
        let c5 = plain.contract(5).unwrap();
        assert_eq!(c5.eval(&t(&[])), plain.eval(&t(&[5])));
        let looped = ChiMap::orlik_solomon(&Matroid::new(2, vec![ElementSet::from([1])]).unwrap());
        assert_eq!(looped.contract(1).unwrap_err(), Error::ContractLoop(1));
    }

    #[test]
    fn uc_holds_for_fig1() {
        let a = fig1();
        for chi in [
            ChiMap::orlik_solomon(&a.matroid()),
            ChiMap::orlik_terao(&a).unwrap(),
            ChiMap::oriented_sign(&a).unwrap(),
        ] {
            let r = verify_uc(&chi);
            assert!(r.is_ok(), "{:?}: {r:?}", chi.kind());
            assert_eq!(r.subsets_checked, 64);
            assert!(r.pairs_checked > 0);
            assert!(verify_uc(&chi.delete(6).unwrap()).is_ok());
            assert!(verify_uc(&chi.contract(5).unwrap()).is_ok());
        }
    }

    #[test]
    fn uc1_fault_is_reported() {
        let chi = ChiMap::orlik_solomon(&fig1().matroid())
            .with_set_value(ElementSet::from([1, 2, 4]), int(0))
            .unwrap();
        let r = verify_uc(&chi);
        assert!(!r.is_ok());
        assert_eq!(r.uc1.len(), 1);
        assert_eq!(r.uc1[0].set, ElementSet::from([1, 2, 4]));
    }

    #[test]
    fn uc2_fault_is_reported() {
        // Rescaling one basis of the full flat breaks the proportionality of
        // boundaries of 4-element unidependents.
        let chi = ChiMap::orlik_solomon(&fig1().matroid())
            .with_set_value(ElementSet::from([1, 2, 4]), int(3))
            .unwrap();
        let r = verify_uc(&chi);
        assert!(r.uc1.is_empty());
        assert!(!r.uc2.is_empty());
    }

    #[test]
    fn beta_config() {
        let cfg = AlgebraConfig::parse(r#"{"beta": {"1,2": "3/2"}}"#).unwrap();
        let beta = cfg.apply(Beta::commutative()).unwrap();
        assert_eq!(beta.get(1, 2), &frac(3, 2));
        assert_eq!(beta.get(1, 3), &int(1));
        assert!(AlgebraConfig::parse(r#"{"beta": {"2,1": "1"}}"#)
            .unwrap()
            .apply(Beta::commutative())
            .is_err());
        assert!(AlgebraConfig::parse(r#"{"beta": {"1,2": "0"}}"#)
            .unwrap()
            .apply(Beta::commutative())
            .is_err());
    }

    #[test]
    fn flat_scale_requires_flat() {
        let ot = ChiMap::orlik_terao(&fig1()).unwrap();
        assert!(ot
            .with_flat_scale(ElementSet::from([1, 2]), int(2))
            .is_err());
        let scaled = ot
            .with_flat_scale(ElementSet::from([1, 2, 3]), int(5))
            .unwrap();
        assert_eq!(scaled.eval(&t(&[1, 3])), int(10));
        assert!(ChiMap::oriented_sign(&fig1())
            .unwrap()
            .with_flat_scale(fig1().ground(), int(2))
            .is_err());
    }
}
