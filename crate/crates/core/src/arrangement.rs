//! Rational vector configurations: the realized matroid, flat bases and
//! determinants taken in a flat basis.

use num_traits::{One, Zero};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::linalg::{self, Scalar};
use crate::matroid::Matroid;
use crate::set::{ElementSet, OrderedTuple, MAX_ELEMENT};

/// How the basis `B_F` of a flat's span is chosen.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum FlatBasisPolicy {
    /// The lexicographically smallest independent subset of the flat.
    #[default]
    Lexicographic,
    /// The standard basis when the flat spans the whole ambient space,
    /// otherwise [`FlatBasisPolicy::Lexicographic`]. Full-rank values are then
    /// ordinary determinants of the vectors.
    AmbientWhenFull,
}

/// `n` vectors in `Q^d`; vector `k` (0-based) realizes element `k + 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arrangement {
    dim: usize,
    vectors: Vec<Vec<Scalar>>,
}

impl Arrangement {
    pub fn new(dim: usize, vectors: Vec<Vec<Scalar>>) -> Result<Self> {
        if vectors.len() > MAX_ELEMENT {
            return Err(Error::Invalid(format!(
                "at most {MAX_ELEMENT} vectors are supported, got {}",
                vectors.len()
            )));
        }
        if let Some(k) = vectors.iter().position(|v| v.len() != dim) {
            return Err(Error::Parse {
                context: format!("vectors[{k}]"),
                message: format!("expected {dim} entries, found {}", vectors[k].len()),
            });
        }
        Ok(Arrangement { dim, vectors })
    }

    /// Integer vectors, mostly for tests and generated configurations.
    pub fn from_integers(dim: usize, vectors: &[Vec<i64>]) -> Result<Self> {
        Arrangement::new(
            dim,
            vectors
                .iter()
                .map(|v| v.iter().map(|&x| linalg::int(x)).collect())
                .collect(),
        )
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn ground(&self) -> ElementSet {
        ElementSet::range(self.vectors.len())
    }

    pub fn vector(&self, e: usize) -> &[Scalar] {
        &self.vectors[e - 1]
    }

    pub fn vectors(&self) -> &[Vec<Scalar>] {
        &self.vectors
    }

    fn check(&self, x: ElementSet) -> Result<()> {
        if x.is_subset(self.ground()) {
            Ok(())
        } else {
            Err(Error::NotInGround {
                set: x,
                ground: self.ground(),
            })
        }
    }

    pub fn rank_of(&self, x: ElementSet) -> usize {
        let rows: Vec<Vec<Scalar>> = x.iter().map(|e| self.vector(e).to_vec()).collect();
        linalg::rank(&rows)
    }

    /// Elements whose vector lies in the span of `x`.
    pub fn span_closure(&self, x: ElementSet) -> ElementSet {
        let r = self.rank_of(x);
        self.ground()
            .iter()
            .filter(|&e| x.contains(e) || self.rank_of(x.with(e)) == r)
            .collect()
    }

    /// True when every vector has last coordinate 1, i.e. the points lie in
    /// the affine hyperplane `x_d = 1`.
    pub fn is_affine(&self) -> bool {
        self.dim > 0 && self.vectors.iter().all(|v| v[self.dim - 1].is_one())
    }

    /// The realized matroid: circuits are the minimal linearly dependent
    /// subsets, found among subsets of size at most `rank + 1`.
    pub fn matroid(&self) -> Matroid {
        let ground = self.ground();
        let r = self.rank_of(ground);
        let mut circuits: Vec<ElementSet> = Vec::new();
        for k in 1..=(r + 1).min(self.len()) {
            for s in ground.combinations(k) {
                if circuits.iter().any(|c| c.is_subset(s)) {
                    continue;
                }
                if self.rank_of(s) < k {
                    circuits.push(s);
                }
            }
        }
        Matroid::new_unchecked(ground, circuits)
    }

    /// Greedy basis of the span of `f`, in increasing index order.
    pub fn flat_basis(&self, f: ElementSet) -> Result<OrderedTuple> {
        self.check(f)?;
        if self.span_closure(f) != f {
            return Err(Error::NotAFlat(f));
        }
        Ok(OrderedTuple::sorted(self.greedy_basis(f)))
    }

    fn greedy_basis(&self, x: ElementSet) -> ElementSet {
        let mut b = ElementSet::EMPTY;
        for e in x.iter() {
            if self.rank_of(b.with(e)) == b.len() + 1 {
                b.insert(e);
            }
        }
        b
    }

    /// Determinant of the vectors of `t` (in tuple order) written in the
    /// lexicographic basis of their flat. Zero on dependent supports.
    pub fn det_in_flat_basis(&self, t: &OrderedTuple) -> Scalar {
        self.det_with_policy(t, FlatBasisPolicy::Lexicographic)
    }

    pub fn det_with_policy(&self, t: &OrderedTuple, policy: FlatBasisPolicy) -> Scalar {
        let support = t.support();
        if !support.is_subset(self.ground()) || self.rank_of(support) < t.len() {
            return Scalar::zero();
        }
        let targets: Vec<&[Scalar]> = t.entries().iter().map(|&e| self.vector(e)).collect();
        if policy == FlatBasisPolicy::AmbientWhenFull && t.len() == self.dim {
            let rows: Vec<Vec<Scalar>> = targets.iter().map(|v| v.to_vec()).collect();
            return linalg::determinant(&rows);
        }
        let basis = self.greedy_basis(self.span_closure(support));
        let basis: Vec<&[Scalar]> = basis.iter().map(|e| self.vector(e)).collect();
        self.det_in_basis(&basis, &targets)
    }

    /// Determinant of the coordinate matrix of `targets` in `basis`. Both lists
    /// must span the same space.
    pub fn det_in_basis(&self, basis: &[&[Scalar]], targets: &[&[Scalar]]) -> Scalar {
        let coords = linalg::coordinates(basis, targets)
            .expect("targets lie in the span of an independent basis");
        linalg::determinant(&coords)
    }
}

/// Parses `{"d": 3, "vectors": [["0","1/2","1"], ...]}`. Entries are rational
/// strings; plain JSON integers are also accepted.
pub fn parse_arrangement(text: &str) -> Result<Arrangement> {
    let value: Value = serde_json::from_str(text).map_err(|e| Error::Parse {
        context: format!("line {} column {}", e.line(), e.column()),
        message: e.to_string(),
    })?;
    let field = |ctx: &str, msg: &str| Error::Parse {
        context: ctx.to_string(),
        message: msg.to_string(),
    };
    let dim = value
        .get("d")
        .ok_or_else(|| field("d", "missing field"))?
        .as_u64()
        .ok_or_else(|| field("d", "expected a non-negative integer"))? as usize;
    let rows = value
        .get("vectors")
        .ok_or_else(|| field("vectors", "missing field"))?
        .as_array()
        .ok_or_else(|| field("vectors", "expected an array"))?;
    let mut vectors = Vec::with_capacity(rows.len());
    for (k, row) in rows.iter().enumerate() {
        let ctx = format!("vectors[{k}]");
        let entries = row
            .as_array()
            .ok_or_else(|| field(&ctx, "expected an array"))?;
        if entries.len() != dim {
            return Err(field(
                &ctx,
                &format!("expected {dim} entries, found {}", entries.len()),
            ));
        }
        let mut v = Vec::with_capacity(dim);
        for (j, x) in entries.iter().enumerate() {
            let ctx = format!("vectors[{k}][{j}]");
            let parsed = match x {
                Value::String(s) => linalg::parse_scalar(s),
                Value::Number(n) if n.is_i64() => Ok(linalg::int(n.as_i64().unwrap())),
                _ => Err(field(&ctx, "expected a rational string such as \"1/2\"")),
            };
            v.push(parsed.map_err(|e| match e {
                Error::Parse { message, .. } => Error::Parse {
                    context: ctx.clone(),
                    message,
                },
                other => other,
            })?);
        }
        vectors.push(v);
    }
    Arrangement::new(dim, vectors)
}

/// Serializes in the same shape [`parse_arrangement`] reads.
pub fn arrangement_to_json(a: &Arrangement) -> String {
    let vectors: Vec<Vec<String>> = a
        .vectors()
        .iter()
        .map(|v| v.iter().map(linalg::format_scalar).collect())
        .collect();
    serde_json::json!({ "d": a.dim(), "vectors": vectors }).to_string()
}
