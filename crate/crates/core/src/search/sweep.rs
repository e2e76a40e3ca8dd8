//! Exhaustive sweeps over all `3^(q^n)` ternary functions, comparing the
//! membership tests with the structural classifiers.

use serde::{Deserialize, Serialize};

use crate::eigen::{
    classify_lambda1, classify_u0u1, is_eigenfunction, u0u1_membership, ClassifiedForm, Lambda1Form,
    TernaryFunction,
};
use crate::error::{Error, Result};
use crate::hamming::GraphParams;
use crate::parallel;

/// Largest number of ternary functions a sweep will visit.
pub const TERNARY_MAX_FUNCTIONS: u64 = 1 << 24;

const CHUNKS: u64 = 256;

/// `3^(q^n)`, or an error above [`TERNARY_MAX_FUNCTIONS`].
pub fn ternary_function_count(params: &GraphParams) -> Result<u64> {
    let nv = params.vertex_count() as u32;
    match 3u64.checked_pow(nv) {
        Some(c) if c <= TERNARY_MAX_FUNCTIONS => Ok(c),
        _ => Err(Error::GuardExceeded(format!(
            "3^{nv} ternary functions exceed the sweep limit of {TERNARY_MAX_FUNCTIONS}"
        ))),
    }
}

/// Class counts of all ternary functions with respect to `U_0 ⊕ U_1`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct U0U1Census {
    pub total: u64,
    pub constants: u64,
    pub quasi_strings: u64,
    pub quasi_crosses: u64,
    pub not_member: u64,
    /// Functions where the membership test and the classifier disagree.
    pub disagreements: u64,
    pub first_disagreement: Option<u64>,
}

impl U0U1Census {
    pub fn members(&self) -> u64 {
        self.constants + self.quasi_strings + self.quasi_crosses
    }

    fn merge(mut self, other: U0U1Census) -> Self {
        self.total += other.total;
        self.constants += other.constants;
        self.quasi_strings += other.quasi_strings;
        self.quasi_crosses += other.quasi_crosses;
        self.not_member += other.not_member;
        self.disagreements += other.disagreements;
        self.first_disagreement = self.first_disagreement.or(other.first_disagreement);
        self
    }
}

/// Class counts of all ternary functions with respect to the `λ_1` eigenspace.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Lambda1Census {
    pub total: u64,
    pub zero: u64,
    pub strings: u64,
    pub crosses: u64,
    pub not_eigen: u64,
    pub disagreements: u64,
    pub first_disagreement: Option<u64>,
}

impl Lambda1Census {
    pub fn eigenfunctions(&self) -> u64 {
        self.zero + self.strings + self.crosses
    }

    fn merge(mut self, other: Lambda1Census) -> Self {
        self.total += other.total;
        self.zero += other.zero;
        self.strings += other.strings;
        self.crosses += other.crosses;
        self.not_eigen += other.not_eigen;
        self.disagreements += other.disagreements;
        self.first_disagreement = self.first_disagreement.or(other.first_disagreement);
        self
    }
}

fn sweep<C, F>(params: &GraphParams, visit: F, merge: fn(C, C) -> C) -> Result<C>
where
    C: Default + Send,
    F: Fn(&mut C, u64, &TernaryFunction) + Sync + Send,
{
    let total = ternary_function_count(params)?;
    let chunks = parallel::chunk_ranges(total, CHUNKS);
    let parts = parallel::map_slice(&chunks, |range| {
        let mut census = C::default();
        for index in range.clone() {
            let f = TernaryFunction::from_index(params, index);
            visit(&mut census, index, &f);
        }
        census
    });
    Ok(parts.into_iter().fold(C::default(), merge))
}

/// Classifies every ternary function on H(n,q) and checks the classifier
/// against the membership test. Function `index` has value `d - 3*(d == 2)`
/// at vertex `v`, where `d` is base-3 digit `v` of `index`.
pub fn enumerate_ternary_u0u1(params: &GraphParams) -> Result<U0U1Census> {
    sweep(params, |c: &mut U0U1Census, index, f| {
        c.total += 1;
        let member = u0u1_membership(f.as_int()).passed();
        let form = classify_u0u1(f);
        match &form {
            Ok(ClassifiedForm::Constant { .. }) => c.constants += 1,
            Ok(ClassifiedForm::QuasiString { .. }) => c.quasi_strings += 1,
            Ok(ClassifiedForm::QuasiCross { .. }) => c.quasi_crosses += 1,
            Ok(ClassifiedForm::NotMember) => c.not_member += 1,
            Err(_) => {}
        }
        let agrees = matches!(&form, Ok(f) if (*f != ClassifiedForm::NotMember) == member);
        if !agrees {
            c.disagreements += 1;
            c.first_disagreement.get_or_insert(index);
        }
    }, U0U1Census::merge)
}

/// Classifies every ternary function with respect to the `λ_1` eigenspace
/// and checks the classifier against the eigen-equation.
pub fn enumerate_ternary_lambda1(params: &GraphParams) -> Result<Lambda1Census> {
    let lambda1 = params.eigenvalue(1)?;
    sweep(params, |c: &mut Lambda1Census, index, f| {
        c.total += 1;
        let eigen = is_eigenfunction(f.as_int(), lambda1).passed();
        let form = classify_lambda1(f);
        match &form {
            Ok(Lambda1Form::Zero) => c.zero += 1,
            Ok(Lambda1Form::String { .. }) => c.strings += 1,
            Ok(Lambda1Form::Cross { .. }) => c.crosses += 1,
            Ok(Lambda1Form::NotEigen) => c.not_eigen += 1,
            Err(_) => {}
        }
        let agrees = matches!(&form, Ok(f) if (*f != Lambda1Form::NotEigen) == eigen);
        if !agrees {
            c.disagreements += 1;
            c.first_disagreement.get_or_insert(index);
        }
    }, Lambda1Census::merge)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(n: usize, q: usize) -> GraphParams {
        GraphParams::new(n, q).unwrap()
    }

    fn binom(n: u64, k: u64) -> u64 {
        if k > n {
            return 0;
        }
        (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
    }

    /// Counts read off the definitions: `3` constants, `3^q - 3` quasi-strings
    /// per coordinate, `(2^q - 2)^2` quasi-crosses per pair of coordinates.
    fn closed_form_members(n: u64, q: u64) -> (u64, u64, u64) {
        let strings = n * (3u64.pow(q as u32) - 3);
        let crosses = binom(n, 2) * (2u64.pow(q as u32) - 2).pow(2);
        (3, strings, crosses)
    }

    /// Strings with `|A| = |B|`: choose `A` of size `k` then `B` of size `k`
    /// among the rest; crosses with `|A| = |B| = k` for `1 <= k <= q-1`.
    fn closed_form_lambda1(n: u64, q: u64) -> (u64, u64) {
        let strings = n * (1..=q / 2).map(|k| binom(q, k) * binom(q - k, k)).sum::<u64>();
        let crosses = binom(n, 2) * (1..q).map(|k| binom(q, k).pow(2)).sum::<u64>();
        (strings, crosses)
    }

    #[test]
    fn u0u1_census_matches_closed_form() {
        for (n, q) in [(1, 2), (1, 3), (2, 2), (2, 3), (3, 2)] {
            let c = enumerate_ternary_u0u1(&p(n, q)).unwrap();
            assert_eq!(c.disagreements, 0);
            assert_eq!(c.total, 3u64.pow((q as u32).pow(n as u32)));
            let (k, s, x) = closed_form_members(n as u64, q as u64);
            assert_eq!((c.constants, c.quasi_strings, c.quasi_crosses), (k, s, x), "H({n},{q})");
            assert_eq!(c.members() + c.not_member, c.total);
        }
        assert_eq!(enumerate_ternary_u0u1(&p(1, 3)).unwrap().members(), 27);
        assert_eq!(enumerate_ternary_u0u1(&p(2, 2)).unwrap().members(), 19);
    }

    #[test]
    fn lambda1_census_matches_closed_form() {
        for (n, q) in [(1, 2), (1, 3), (2, 2), (2, 3), (3, 2)] {
            let c = enumerate_ternary_lambda1(&p(n, q)).unwrap();
            assert_eq!(c.disagreements, 0);
            assert_eq!(c.zero, 1);
            assert_eq!((c.strings, c.crosses), closed_form_lambda1(n as u64, q as u64), "H({n},{q})");
        }
        assert_eq!(enumerate_ternary_lambda1(&p(2, 2)).unwrap().eigenfunctions(), 9);
    }

    #[test]
    fn guard() {
        assert!(ternary_function_count(&p(2, 4)).is_err());
        assert_eq!(ternary_function_count(&p(2, 3)).unwrap(), 19683);
        assert!(enumerate_ternary_u0u1(&p(4, 2)).is_err());
    }
}
