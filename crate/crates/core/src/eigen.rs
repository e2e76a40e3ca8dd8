//! Integer-valued functions on H(n,q): the eigen-equation, restrictions,
//! quasi-strings and quasi-crosses, and the classifier for `{-1,0,1}`-valued
//! functions in `U_0 ⊕ U_1` and `U_1`.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hamming::{Automorphism, GraphParams};
use crate::parallel;
use crate::partition::essential_coordinates_of;

/// Largest admissible absolute value of an [`IntFunction`].
pub const MAX_MAGNITUDE: i64 = 1 << 20;

/// A function `A^n -> Z` stored in vertex-index order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntFunction {
    params: GraphParams,
    values: Vec<i64>,
}

impl IntFunction {
    pub fn new(params: GraphParams, values: Vec<i64>) -> Result<Self> {
        if values.len() != params.vertex_count() {
            return Err(Error::InvalidFunction(format!(
                "{} values given, expected {}",
                values.len(),
                params.vertex_count()
            )));
        }
        if let Some(v) = values.iter().find(|v| v.abs() > MAX_MAGNITUDE) {
            return Err(Error::InvalidFunction(format!("value {v} exceeds magnitude bound {MAX_MAGNITUDE}")));
        }
        Ok(IntFunction { params, values })
    }

    pub fn constant(params: GraphParams, c: i64) -> Result<Self> {
        let n = params.vertex_count();
        Self::new(params, vec![c; n])
    }

    pub fn from_fn<F: Fn(&[usize]) -> i64>(params: GraphParams, f: F) -> Result<Self> {
        let values = (0..params.vertex_count())
            .map(|v| params.decode(v).map(|t| f(&t)))
            .collect::<Result<Vec<_>>>()?;
        Self::new(params, values)
    }

    pub fn params(&self) -> &GraphParams {
        &self.params
    }

    pub fn values(&self) -> &[i64] {
        &self.values
    }

    #[inline]
    pub fn value(&self, v: usize) -> i64 {
        self.values[v]
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&x| x == 0)
    }

    fn same_params(&self, other: &IntFunction) -> Result<()> {
        if self.params != other.params {
            return Err(Error::ParamsMismatch(format!(
                "H({},{}) vs H({},{})",
                self.params.n(),
                self.params.q(),
                other.params.n(),
                other.params.q()
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &IntFunction) -> Result<IntFunction> {
        self.same_params(other)?;
        Self::new(self.params.clone(), self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &IntFunction) -> Result<IntFunction> {
        self.same_params(other)?;
        Self::new(self.params.clone(), self.values.iter().zip(&other.values).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, c: i64) -> Result<IntFunction> {
        Self::new(self.params.clone(), self.values.iter().map(|a| a * c).collect())
    }

    /// `(Af)(x) = sum of f over the neighbors of x`.
    pub fn adjacency_apply(&self) -> Vec<i64> {
        adjacency_apply(&self.params, &self.values)
    }

    /// `f ∘ g^{-1}`, i.e. the function transported along `g`.
    pub fn apply_automorphism(&self, g: &Automorphism) -> Result<IntFunction> {
        let map = g.vertex_map(&self.params)?;
        let mut values = vec![0; self.values.len()];
        for (v, &x) in self.values.iter().enumerate() {
            values[map[v]] = x;
        }
        Ok(IntFunction { params: self.params.clone(), values })
    }

    pub fn essential_coordinates(&self) -> BTreeSet<usize> {
        essential_coordinates_of(&self.params, |v| self.values[v])
    }
}

pub(crate) fn adjacency_apply(params: &GraphParams, values: &[i64]) -> Vec<i64> {
    parallel::map_range(0..params.vertex_count() as u64, |v| {
        params.neighbors_unchecked(v as usize).map(|(_, u)| values[u]).sum()
    })
}

/// A function with every value in `{-1, 0, 1}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TernaryFunction(IntFunction);

impl TernaryFunction {
    pub fn new(f: IntFunction) -> Result<Self> {
        if let Some(v) = f.values.iter().find(|v| !(-1..=1).contains(*v)) {
            return Err(Error::InvalidFunction(format!("value {v} is not in {{-1,0,1}}")));
        }
        Ok(TernaryFunction(f))
    }

    /// Decodes `index` as base-3 digits `0,1,2 -> 0,1,-1`, vertex 0 least significant.
    pub fn from_index(params: &GraphParams, mut index: u64) -> Self {
        let values = (0..params.vertex_count())
            .map(|_| {
                let d = index % 3;
                index /= 3;
                [0, 1, -1][d as usize]
            })
            .collect();
        TernaryFunction(IntFunction { params: params.clone(), values })
    }

    pub fn as_int(&self) -> &IntFunction {
        &self.0
    }

    pub fn into_int(self) -> IntFunction {
        self.0
    }

    pub fn params(&self) -> &GraphParams {
        &self.0.params
    }

    pub fn values(&self) -> &[i64] {
        &self.0.values
    }
}

/// A set of alphabet symbols, kept sorted.
pub type SymbolSet = BTreeSet<usize>;

fn membership_mask(q: usize, set: &SymbolSet) -> Result<Vec<bool>> {
    let mut mask = vec![false; q];
    for &a in set {
        if a >= q {
            return Err(Error::SymbolOutOfRange { symbol: a, q });
        }
        mask[a] = true;
    }
    Ok(mask)
}

pub fn complement_set(q: usize, set: &SymbolSet) -> SymbolSet {
    (0..q).filter(|a| !set.contains(a)).collect()
}

/// Verdict of [`is_eigenfunction`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EigenVerdict {
    Pass,
    /// The eigen-equation fails at this vertex.
    Fail { witness: usize },
}

impl EigenVerdict {
    pub fn passed(&self) -> bool {
        *self == EigenVerdict::Pass
    }
}

/// `sum_{y ~ x} f(y) = λ f(x)` at every vertex. The all-zero function passes
/// for every `λ`.
pub fn is_eigenfunction(f: &IntFunction, lambda: i64) -> EigenVerdict {
    let af = f.adjacency_apply();
    match af.iter().zip(&f.values).position(|(a, x)| *a != lambda * x) {
        None => EigenVerdict::Pass,
        Some(witness) => EigenVerdict::Fail { witness },
    }
}

/// `(f)_k^a` on H(n-1,q): the value at `y'` is `f` at `y'` with `a` inserted
/// at position `k`.
pub fn restrict(f: &IntFunction, k: usize, a: usize) -> Result<IntFunction> {
    let params = f.params();
    if params.n() < 2 {
        return Err(Error::Precondition("restriction needs n >= 2".into()));
    }
    params.check_coord(k)?;
    params.check_symbol(a)?;
    let out = GraphParams::new(params.n() - 1, params.q())?;
    let high = params.stride(k) * params.q();
    let low = params.stride(k);
    let values = (0..out.vertex_count())
        .map(|y| {
            // split y at position k and insert a
            let hi = y / low;
            let lo = y % low;
            f.values[hi * high + a * low + lo]
        })
        .collect();
    IntFunction::new(out, values)
}

/// `(f)_k^a - (f)_k^b`.
pub fn restriction_difference(f: &IntFunction, k: usize, a: usize, b: usize) -> Result<IntFunction> {
    if a == b {
        return Err(Error::Precondition("restriction symbols must differ".into()));
    }
    restrict(f, k, a)?.sub(&restrict(f, k, b)?)
}

/// The `(A, B, i)`-quasi string: `1` if `x_i ∈ A`, `-1` if `x_i ∈ B`, else `0`.
pub fn quasi_string(params: &GraphParams, a: &SymbolSet, b: &SymbolSet, i: usize) -> Result<TernaryFunction> {
    params.check_coord(i)?;
    if !a.is_disjoint(b) {
        return Err(Error::Precondition("A and B must be disjoint".into()));
    }
    if a.is_empty() && b.is_empty() {
        return Err(Error::Precondition("A ∪ B must be nonempty".into()));
    }
    let am = membership_mask(params.q(), a)?;
    let bm = membership_mask(params.q(), b)?;
    let values = (0..params.vertex_count())
        .map(|v| {
            let x = params.digit(v, i);
            am[x] as i64 - bm[x] as i64
        })
        .collect();
    TernaryFunction::new(IntFunction::new(params.clone(), values)?)
}

/// The `(A, B, i, j)`-quasi cross: `1` if `x_i ∈ A` and `x_j ∉ B`, `-1` if
/// `x_i ∉ A` and `x_j ∈ B`, else `0`.
pub fn quasi_cross(params: &GraphParams, a: &SymbolSet, b: &SymbolSet, i: usize, j: usize) -> Result<TernaryFunction> {
    params.check_coord(i)?;
    params.check_coord(j)?;
    if i == j {
        return Err(Error::Precondition("cross coordinates must differ".into()));
    }
    if a.is_empty() || b.is_empty() {
        return Err(Error::Precondition("A and B must be nonempty".into()));
    }
    let am = membership_mask(params.q(), a)?;
    let bm = membership_mask(params.q(), b)?;
    let values = (0..params.vertex_count())
        .map(|v| am[params.digit(v, i)] as i64 - bm[params.digit(v, j)] as i64)
        .collect();
    TernaryFunction::new(IntFunction::new(params.clone(), values)?)
}

/// Verdict of [`u0u1_membership`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MembershipVerdict {
    /// `(A - λ_1 I) f` is the constant `residual`.
    Pass { residual: i64 },
    /// The residual differs at these two vertices.
    Fail { witness: (usize, usize) },
}

impl MembershipVerdict {
    pub fn passed(&self) -> bool {
        matches!(self, MembershipVerdict::Pass { .. })
    }
}

/// `f ∈ U_0 ⊕ U_1` iff `(A - λ_1 I) f` is constant.
pub fn u0u1_membership(f: &IntFunction) -> MembershipVerdict {
    let lambda1 = f.params().eigenvalue(1).expect("n >= 1");
    let af = f.adjacency_apply();
    let residual: Vec<i64> = af.iter().zip(f.values()).map(|(a, x)| a - lambda1 * x).collect();
    match residual.iter().position(|&r| r != residual[0]) {
        None => MembershipVerdict::Pass { residual: residual[0] },
        Some(v) => MembershipVerdict::Fail { witness: (0, v) },
    }
}

/// `(A - λ_{i-1} I)(A - λ_i I) f = 0`, i.e. `f ∈ U_{i-1} ⊕ U_i`.
pub fn in_adjacent_eigenspaces(f: &IntFunction, i: usize) -> Result<bool> {
    if i == 0 {
        return Err(Error::EigenvalueIndexOutOfRange { index: 0, n: f.params().n() });
    }
    let params = f.params();
    let hi = params.eigenvalue(i - 1)?;
    let lo = params.eigenvalue(i).unwrap_or(params.eigenvalue(i - 1)? - params.q() as i64);
    let step = |vals: &[i64], l: i64| -> Vec<i64> {
        adjacency_apply(params, vals).iter().zip(vals).map(|(a, x)| a - l * x).collect()
    };
    let once = step(f.values(), lo);
    Ok(step(&once, hi).iter().all(|&x| x == 0))
}

/// Tag returned by [`classify_u0u1`].
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "form", rename_all = "snake_case")]
pub enum ClassifiedForm {
    Constant { value: i64 },
    QuasiString { a: SymbolSet, b: SymbolSet, i: usize },
    QuasiCross { a: SymbolSet, b: SymbolSet, i: usize, j: usize },
    NotMember,
}

impl ClassifiedForm {
    /// Rebuilds the tagged function; `None` for `NotMember`.
    pub fn reconstruct(&self, params: &GraphParams) -> Result<Option<TernaryFunction>> {
        Ok(match self {
            ClassifiedForm::Constant { value } => {
                Some(TernaryFunction::new(IntFunction::constant(params.clone(), *value)?)?)
            }
            ClassifiedForm::QuasiString { a, b, i } => Some(quasi_string(params, a, b, *i)?),
            ClassifiedForm::QuasiCross { a, b, i, j } => Some(quasi_cross(params, a, b, *i, *j)?),
            ClassifiedForm::NotMember => None,
        })
    }
}

/// Classifies a ternary function as a constant, a quasi-string, a quasi-cross
/// or a non-member of `U_0 ⊕ U_1`. Crosses are reported with `i < j`.
///
/// Returns an error only if a member of `U_0 ⊕ U_1` fails to match any of the
/// three forms, which would contradict the characterization.
pub fn classify_u0u1(f: &TernaryFunction) -> Result<ClassifiedForm> {
    let g = f.as_int();
    if !u0u1_membership(g).passed() {
        return Ok(ClassifiedForm::NotMember);
    }
    let params = g.params();
    let essential: Vec<usize> = g.essential_coordinates().into_iter().collect();
    let form = match essential.as_slice() {
        [] => ClassifiedForm::Constant { value: g.value(0) },
        &[i] => {
            // the function only depends on x_i; scan fibers in symbol order
            let stride = params.stride(i);
            let mut a = SymbolSet::new();
            let mut b = SymbolSet::new();
            for s in 0..params.q() {
                match g.value(s * stride) {
                    1 => a.insert(s),
                    -1 => b.insert(s),
                    _ => false,
                };
            }
            ClassifiedForm::QuasiString { a, b, i }
        }
        &[i, j] => {
            // f = [x_i ∈ A] - [x_j ∈ B]
            let mut a = SymbolSet::new();
            let mut b = SymbolSet::new();
            for v in 0..params.vertex_count() {
                match g.value(v) {
                    1 => a.insert(params.digit(v, i)),
                    -1 => b.insert(params.digit(v, j)),
                    _ => false,
                };
            }
            if a.is_empty() || b.is_empty() {
                return Err(Error::ClassifierContradiction(format!(
                    "member with essential coordinates {{{i},{j}}} has no cross form"
                )));
            }
            ClassifiedForm::QuasiCross { a, b, i, j }
        }
        more => {
            return Err(Error::ClassifierContradiction(format!(
                "member of U0+U1 with {} essential coordinates",
                more.len()
            )))
        }
    };
    match form.reconstruct(params)? {
        Some(h) if h == *f => Ok(form),
        _ => Err(Error::ClassifierContradiction(format!("reconstruction of {form:?} does not match input"))),
    }
}

/// Result of [`classify_lambda1`].
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "form", rename_all = "snake_case")]
pub enum Lambda1Form {
    Zero,
    String { a: SymbolSet, b: SymbolSet, i: usize },
    Cross { a: SymbolSet, b: SymbolSet, i: usize, j: usize },
    NotEigen,
}

/// Classifies a ternary function as a `λ_1`-eigenfunction (string, cross or
/// zero) or not. Positive answers are re-checked against the eigen-equation.
pub fn classify_lambda1(f: &TernaryFunction) -> Result<Lambda1Form> {
    let g = f.as_int();
    if g.is_zero() {
        return Ok(Lambda1Form::Zero);
    }
    let form = match classify_u0u1(f)? {
        ClassifiedForm::QuasiString { a, b, i } if a.len() == b.len() => Lambda1Form::String { a, b, i },
        ClassifiedForm::QuasiCross { a, b, i, j } if a.len() == b.len() => Lambda1Form::Cross { a, b, i, j },
        _ => Lambda1Form::NotEigen,
    };
    let lambda1 = g.params().eigenvalue(1)?;
    let eigen = is_eigenfunction(g, lambda1).passed();
    if eigen != (form != Lambda1Form::NotEigen) {
        return Err(Error::ClassifierContradiction(format!(
            "classifier says {form:?} but eigen-equation says {eigen}"
        )));
    }
    Ok(form)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn p(n: usize, q: usize) -> GraphParams {
        GraphParams::new(n, q).unwrap()
    }

    fn set(xs: &[usize]) -> SymbolSet {
        xs.iter().copied().collect()
    }

    /// Eigen-equation evaluated from the tuple definition of adjacency.
    fn oracle_eigen(f: &IntFunction, lambda: i64) -> bool {
        let g = f.params();
        (0..g.vertex_count()).all(|x| {
            let s: i64 = (0..g.vertex_count()).filter(|&y| g.distance(x, y) == 1).map(|y| f.value(y)).sum();
            s == lambda * f.value(x)
        })
    }

    #[test]
    fn eigen_equation() {
        let g = p(2, 3);
        let zero = IntFunction::constant(g.clone(), 0).unwrap();
        for l in -5..5 {
            assert!(is_eigenfunction(&zero, l).passed());
        }
        let one = IntFunction::constant(g.clone(), 1).unwrap();
        assert!(is_eigenfunction(&one, 4).passed());
        assert!(!is_eigenfunction(&one, 1).passed());

        let s = quasi_string(&g, &set(&[0]), &set(&[1]), 0).unwrap();
        assert!(oracle_eigen(s.as_int(), 1));
        assert!(is_eigenfunction(s.as_int(), g.eigenvalue(1).unwrap()).passed());
        assert!(!is_eigenfunction(s.as_int(), 0).passed());
    }

    #[test]
    fn restrictions() {
        let g = p(3, 3);
        let s = quasi_string(&g, &set(&[0]), &set(&[1]), 0).unwrap();
        let r = restrict(s.as_int(), 2, 1).unwrap();
        assert_eq!(&r, quasi_string(&p(2, 3), &set(&[0]), &set(&[1]), 0).unwrap().as_int());
        let r = restrict(s.as_int(), 0, 0).unwrap();
        assert_eq!(r, IntFunction::constant(p(2, 3), 1).unwrap());
        let c = IntFunction::constant(g.clone(), 7).unwrap();
        assert_eq!(restrict(&c, 1, 2).unwrap(), IntFunction::constant(p(2, 3), 7).unwrap());
        assert!(restriction_difference(&c, 1, 0, 2).unwrap().is_zero());
        assert!(restriction_difference(&c, 1, 0, 0).is_err());
        assert!(restrict(&IntFunction::constant(p(1, 3), 1).unwrap(), 0, 0).is_err());

        // restriction agrees with explicit insertion
        let f = IntFunction::new(g.clone(), (0..27).collect()).unwrap();
        for k in 0..3 {
            for a in 0..3 {
                let r = restrict(&f, k, a).unwrap();
                for y in 0..9 {
                    let mut t = p(2, 3).decode(y).unwrap();
                    t.insert(k, a);
                    assert_eq!(r.value(y), f.value(g.encode(&t).unwrap()));
                }
            }
        }
    }

    #[test]
    fn string_difference_is_lambda0() {
        let g = p(2, 3);
        let s = quasi_string(&g, &set(&[0]), &set(&[1]), 0).unwrap();
        let d = restriction_difference(s.as_int(), 1, 0, 2).unwrap();
        assert!(is_eigenfunction(&d, p(1, 3).eigenvalue(0).unwrap()).passed());
    }

    #[test]
    fn string_and_cross_values() {
        let s = quasi_string(&p(1, 3), &set(&[0]), &set(&[1]), 0).unwrap();
        assert_eq!(s.values(), &[1, -1, 0]);
        let g = p(2, 2);
        let c = quasi_cross(&g, &set(&[0]), &set(&[1]), 0, 1).unwrap();
        assert_eq!(c.values(), &[1, 0, 0, -1]);
        assert_eq!(c.as_int().essential_coordinates(), BTreeSet::from([0, 1]));
        let ind = quasi_string(&p(2, 3), &set(&[1, 2]), &set(&[]), 1).unwrap();
        assert!(ind.values().iter().all(|&v| v == 0 || v == 1));
        assert_eq!(ind.as_int().essential_coordinates(), BTreeSet::from([1]));

        assert!(quasi_string(&g, &set(&[0]), &set(&[0]), 0).is_err());
        assert!(quasi_string(&g, &set(&[]), &set(&[]), 0).is_err());
        assert!(quasi_string(&g, &set(&[2]), &set(&[]), 0).is_err());
        assert!(quasi_cross(&g, &set(&[0]), &set(&[1]), 1, 1).is_err());
        assert!(quasi_cross(&g, &set(&[]), &set(&[1]), 0, 1).is_err());
    }

    /// Every pair of subsets over H(2,q), q <= 4: the cross is half the sum
    /// of the (A, Ā, i) and (B̄, B, j) strings.
    #[test]
    fn cross_is_half_sum_of_strings() {
        for q in 2..=4 {
            let g = p(2, q);
            for am in 1u32..(1 << q) {
                for bm in 1u32..(1 << q) {
                    let a: SymbolSet = (0..q).filter(|s| am >> s & 1 == 1).collect();
                    let b: SymbolSet = (0..q).filter(|s| bm >> s & 1 == 1).collect();
                    let cross = quasi_cross(&g, &a, &b, 0, 1).unwrap();
                    let abar = complement_set(q, &a);
                    let bbar = complement_set(q, &b);
                    let s1 = quasi_string(&g, &a, &abar, 0).unwrap();
                    let s2 = quasi_string(&g, &bbar, &b, 1).unwrap();
                    let sum = s1.as_int().add(s2.as_int()).unwrap();
                    assert_eq!(cross.as_int().scale(2).unwrap(), sum);
                }
            }
        }
    }

    #[test]
    fn membership() {
        let g = p(2, 3);
        assert!(u0u1_membership(&IntFunction::constant(g.clone(), -1).unwrap()).passed());
        let c = quasi_cross(&g, &set(&[0]), &set(&[1, 2]), 1, 0).unwrap();
        assert!(u0u1_membership(c.as_int()).passed());
        let mut vals = vec![0; 9];
        vals[4] = 1;
        let single = TernaryFunction::new(IntFunction::new(g.clone(), vals).unwrap()).unwrap();
        // residual: -1 at the vertex itself, 1 at its neighbors, 0 elsewhere
        assert!(!u0u1_membership(single.as_int()).passed());
        assert_eq!(classify_u0u1(&single).unwrap(), ClassifiedForm::NotMember);
    }

    #[test]
    fn classification_examples() {
        let g = p(2, 3);
        let c = TernaryFunction::new(IntFunction::constant(g.clone(), -1).unwrap()).unwrap();
        assert_eq!(classify_u0u1(&c).unwrap(), ClassifiedForm::Constant { value: -1 });
        let s = quasi_string(&g, &set(&[2]), &set(&[0]), 1).unwrap();
        assert_eq!(
            classify_u0u1(&s).unwrap(),
            ClassifiedForm::QuasiString { a: set(&[2]), b: set(&[0]), i: 1 }
        );
        let s = quasi_string(&g, &set(&[0]), &set(&[1]), 0).unwrap();
        assert_eq!(classify_lambda1(&s).unwrap(), Lambda1Form::String { a: set(&[0]), b: set(&[1]), i: 0 });
        let s = quasi_string(&g, &set(&[0]), &set(&[1, 2]), 0).unwrap();
        assert!(u0u1_membership(s.as_int()).passed());
        assert_eq!(classify_lambda1(&s).unwrap(), Lambda1Form::NotEigen);
        let x = quasi_cross(&p(2, 4), &set(&[0]), &set(&[1]), 0, 1).unwrap();
        assert!(oracle_eigen(x.as_int(), p(2, 4).eigenvalue(1).unwrap()));
        assert_eq!(
            classify_lambda1(&x).unwrap(),
            Lambda1Form::Cross { a: set(&[0]), b: set(&[1]), i: 0, j: 1 }
        );
        let zero = TernaryFunction::new(IntFunction::constant(g.clone(), 0).unwrap()).unwrap();
        assert_eq!(classify_lambda1(&zero).unwrap(), Lambda1Form::Zero);
    }

    #[test]
    fn cross_orientation_is_normalized() {
        // (A,B,j,i) with j > i is reported as (B̄, Ā, i, j)
        let g = p(3, 3);
        let x = quasi_cross(&g, &set(&[0]), &set(&[1, 2]), 2, 0).unwrap();
        assert_eq!(
            classify_u0u1(&x).unwrap(),
            ClassifiedForm::QuasiCross { a: set(&[0]), b: set(&[1, 2]), i: 0, j: 2 }
        );
    }

    #[test]
    fn classification_is_equivariant() {
        let g = p(3, 3);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let inputs = [
            quasi_string(&g, &set(&[0]), &set(&[2]), 1).unwrap(),
            quasi_cross(&g, &set(&[0, 1]), &set(&[2]), 0, 2).unwrap(),
            quasi_cross(&g, &set(&[1]), &set(&[0]), 2, 1).unwrap(),
        ];
        for f in &inputs {
            let base = classify_u0u1(f).unwrap();
            for _ in 0..20 {
                let a = Automorphism::random(&g, &mut rng);
                let h = TernaryFunction::new(f.as_int().apply_automorphism(&a).unwrap()).unwrap();
                let form = classify_u0u1(&h).unwrap();
                assert_eq!(form.reconstruct(&g).unwrap().unwrap(), h);
                match (&base, &form) {
                    (ClassifiedForm::QuasiString { a: a0, b: b0, i: i0 }, ClassifiedForm::QuasiString { a: a1, b: b1, i: i1 }) => {
                        assert_eq!(a.coord_perm()[*i0], *i1);
                        assert_eq!(a1, &a0.iter().map(|&s| a.symbol_perms()[*i1][s]).collect::<SymbolSet>());
                        assert_eq!(b1, &b0.iter().map(|&s| a.symbol_perms()[*i1][s]).collect::<SymbolSet>());
                    }
                    (ClassifiedForm::QuasiCross { i: i0, j: j0, .. }, ClassifiedForm::QuasiCross { i: i1, j: j1, .. }) => {
                        let mapped = BTreeSet::from([a.coord_perm()[*i0], a.coord_perm()[*j0]]);
                        assert_eq!(mapped, BTreeSet::from([*i1, *j1]));
                    }
                    other => panic!("tag kind changed: {other:?}"),
                }
            }
        }
    }

    #[test]
    fn adjacent_eigenspace_annihilator() {
        let g = p(3, 3);
        let s = quasi_string(&g, &set(&[0]), &set(&[1]), 0).unwrap();
        // a λ1-eigenfunction lies in U0+U1 and in U1+U2
        assert!(in_adjacent_eigenspaces(s.as_int(), 1).unwrap());
        assert!(in_adjacent_eigenspaces(s.as_int(), 2).unwrap());
        let mut vals = vec![0; 27];
        vals[0] = 1;
        let delta = IntFunction::new(g, vals).unwrap();
        assert!(!in_adjacent_eigenspaces(&delta, 1).unwrap());
    }

    #[test]
    fn magnitude_guard() {
        assert!(IntFunction::new(p(1, 2), vec![MAX_MAGNITUDE + 1, 0]).is_err());
        assert!(IntFunction::new(p(1, 2), vec![0]).is_err());
        assert!(TernaryFunction::new(IntFunction::new(p(1, 2), vec![2, 0]).unwrap()).is_err());
    }
}
