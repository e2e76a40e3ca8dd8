//! Exhaustive and backtracking enumeration of equitable 2-partitions,
//! canonical forms under the automorphism group, ternary-function sweeps and
//! the structural classifier for second-eigenvalue partitions.

mod canon;
mod sweep;
mod theorem5;

pub use canon::{are_isomorphic, canonical_form, canonical_form_with_automorphism, canonical_partition, CANON_MAX};
pub use sweep::{
    enumerate_ternary_lambda1, enumerate_ternary_u0u1, ternary_function_count, Lambda1Census, U0U1Census,
    TERNARY_MAX_FUNCTIONS,
};
pub use theorem5::{classify_theorem5, ConstructionAMatch, ConstructionBMatch, Theorem5Tag};

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::bitset::Bitset;
use crate::error::{Error, Result};
use crate::hamming::GraphParams;
use crate::parallel;
use crate::partition::{equitable_check, is_reduced, predicted_cell_size, QuotientMatrix, TwoPartition};

/// Largest `q^n` accepted by [`brute_force_enumerate`].
pub const BRUTE_FORCE_MAX_VERTICES: usize = 25;

/// Number of leading vertices fixed per search shard.
const SHARD_DEPTH: usize = 12;

/// Filters applied to an enumeration.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnumConstraints {
    /// Exact quotient matrix.
    pub quotient: Option<QuotientMatrix>,
    /// Second quotient eigenvalue must equal `λ_i(n,q)`.
    pub eigenvalue_index: Option<usize>,
    /// Keep only partitions in which every coordinate is essential.
    pub reduced_only: bool,
    /// Keep one canonical representative per isomorphism class.
    pub up_to_iso: bool,
}

impl EnumConstraints {
    pub fn with_eigenvalue_index(i: usize) -> Self {
        EnumConstraints { eigenvalue_index: Some(i), ..Default::default() }
    }

    pub fn with_quotient(s: QuotientMatrix) -> Self {
        EnumConstraints { quotient: Some(s), ..Default::default() }
    }

    pub fn reduced(mut self) -> Self {
        self.reduced_only = true;
        self
    }

    pub fn up_to_iso(mut self) -> Self {
        self.up_to_iso = true;
        self
    }

    pub fn validate(&self, params: &GraphParams) -> Result<()> {
        if self.quotient.is_some() && self.eigenvalue_index.is_some() {
            return Err(Error::Precondition("set at most one of quotient and eigenvalue index".into()));
        }
        if let Some(i) = self.eigenvalue_index {
            params.eigenvalue(i)?;
        }
        if let Some(s) = &self.quotient {
            if s.size() != 2 {
                return Err(Error::InvalidQuotient("a 2-partition needs a 2x2 quotient matrix".into()));
            }
            s.check_row_sums(params)?;
        }
        Ok(())
    }

    fn admits_quotient(&self, params: &GraphParams, s: &QuotientMatrix) -> bool {
        if let Some(t) = &self.quotient {
            return s == t;
        }
        if let Some(i) = self.eigenvalue_index {
            return params.eigenvalue(i).map(|l| s.get(0, 0) - s.get(1, 0) == l).unwrap_or(false);
        }
        true
    }
}

/// Search strategy for [`enumerate`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    BruteForce,
    Backtrack,
}

/// Output of [`enumerate`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Enumeration {
    /// Labeled partitions, or canonical representatives when `up_to_iso` is set.
    pub partitions: Vec<TwoPartition>,
    /// Number of labeled partitions satisfying the constraints.
    pub count: usize,
    /// Number of isomorphism classes, when within the canonical-form guard.
    pub count_up_to_iso: Option<usize>,
    /// Labeled count per quotient matrix.
    pub quotients: BTreeMap<QuotientMatrix, usize>,
}

/// Every quotient matrix with second eigenvalue `λ_i(n,q)` that admits a
/// partition into two nonempty cells of integral size, ordered by `S21`.
pub fn candidate_quotients(params: &GraphParams, i: usize) -> Result<Vec<QuotientMatrix>> {
    let lambda = params.eigenvalue(i)?;
    let deg = params.degree() as i64;
    let boundary = deg - lambda; // S12 + S21 = q i
    let mut out = Vec::new();
    for s21 in 1..boundary {
        let s11 = lambda + s21;
        if !(0..=deg).contains(&s11) || s21 > deg {
            continue;
        }
        let s = QuotientMatrix::two(s11, deg - s11, s21, deg - s21)?;
        if predicted_cell_size(&s, params)?.is_integer() {
            out.push(s);
        }
    }
    Ok(out)
}

/// Tests all `2^(q^n) - 2` proper nonempty cells. Output sorted by cell.
pub fn brute_force_enumerate(params: &GraphParams, constraints: &EnumConstraints) -> Result<Vec<TwoPartition>> {
    constraints.validate(params)?;
    let nv = params.vertex_count();
    if nv > BRUTE_FORCE_MAX_VERTICES {
        return Err(Error::GuardExceeded(format!(
            "brute force needs q^n <= {BRUTE_FORCE_MAX_VERTICES}, got {nv}"
        )));
    }
    let nb: Vec<u64> = (0..nv)
        .map(|v| params.neighbors_unchecked(v).fold(0u64, |m, (_, u)| m | (1 << u)))
        .collect();
    let hits = parallel::filter_map_range(1..(1u64 << nv) - 1, |mask| {
        let mut reference = [u32::MAX; 2];
        for (v, &m) in nb.iter().enumerate() {
            let label = ((mask >> v) & 1 == 0) as usize;
            let c = (m & mask).count_ones();
            if reference[label] == u32::MAX {
                reference[label] = c;
            } else if reference[label] != c {
                return None;
            }
        }
        Some((mask, reference))
    });
    let deg = params.degree() as i64;
    let mut out = Vec::new();
    for (mask, [s11, s21]) in hits {
        let (s11, s21) = (s11 as i64, s21 as i64);
        let s = QuotientMatrix::two(s11, deg - s11, s21, deg - s21)?;
        if constraints.admits_quotient(params, &s) {
            out.push(TwoPartition::new(params.clone(), Bitset::from_u64(nv, mask))?);
        }
    }
    finish(out, constraints)
}

/// Vertex-by-vertex backtracking against each candidate quotient matrix.
/// Needs a quotient or an eigenvalue index. Output sorted by cell.
pub fn backtracking_enumerate(params: &GraphParams, constraints: &EnumConstraints) -> Result<Vec<TwoPartition>> {
    constraints.validate(params)?;
    let candidates = match (&constraints.quotient, constraints.eigenvalue_index) {
        (Some(s), _) => {
            if s.get(1, 0) > 0 && s.get(0, 1) > 0 && predicted_cell_size(s, params)?.is_integer() {
                vec![s.clone()]
            } else {
                Vec::new()
            }
        }
        (None, Some(i)) => candidate_quotients(params, i)?,
        (None, None) => {
            return Err(Error::Precondition("backtracking needs a quotient matrix or an eigenvalue index".into()))
        }
    };
    let adjacency = params.adjacency();
    let mut out = Vec::new();
    for s in &candidates {
        let search = Backtracker::new(params, &adjacency, s)?;
        for cell in search.run() {
            let p = TwoPartition::new(params.clone(), cell)?;
            if equitable_check(&p).quotient() != Some(s) {
                return Err(Error::Reverification(format!("backtracking produced a partition not matching {s}")));
            }
            out.push(p);
        }
    }
    out.sort_by(|a, b| a.cell().cmp(b.cell()));
    finish(out, constraints)
}

/// Applies the reduced and isomorphism filters to a sorted list.
fn finish(mut out: Vec<TwoPartition>, constraints: &EnumConstraints) -> Result<Vec<TwoPartition>> {
    if constraints.reduced_only {
        out.retain(is_reduced);
    }
    if constraints.up_to_iso {
        out = iso_representatives(&out)?;
    }
    Ok(out)
}

/// Canonical representatives of the isomorphism classes in `parts`, sorted.
pub fn iso_representatives(parts: &[TwoPartition]) -> Result<Vec<TwoPartition>> {
    let mut reps = parallel::map_slice(parts, canonical_partition).into_iter().collect::<Result<Vec<_>>>()?;
    reps.sort_by(|a, b| a.cell().cmp(b.cell()));
    reps.dedup();
    Ok(reps)
}

/// Runs one of the enumerators and gathers the summary counts.
pub fn enumerate(params: &GraphParams, constraints: &EnumConstraints, method: Method) -> Result<Enumeration> {
    let labeled_constraints = EnumConstraints { up_to_iso: false, ..constraints.clone() };
    let labeled = match method {
        Method::BruteForce => brute_force_enumerate(params, &labeled_constraints)?,
        Method::Backtrack => backtracking_enumerate(params, &labeled_constraints)?,
    };
    let mut quotients = BTreeMap::new();
    for p in &labeled {
        let s = equitable_check(p)
            .quotient()
            .cloned()
            .ok_or_else(|| Error::Reverification("enumerated partition is not equitable".into()))?;
        *quotients.entry(s).or_insert(0) += 1;
    }
    let canon_ok = params.n() <= CANON_MAX && params.q() <= CANON_MAX;
    let reps = if canon_ok { Some(iso_representatives(&labeled)?) } else { None };
    let count = labeled.len();
    let count_up_to_iso = reps.as_ref().map(Vec::len);
    let partitions = if constraints.up_to_iso {
        reps.ok_or_else(|| Error::GuardExceeded(format!("canonical forms need n, q <= {CANON_MAX}")))?
    } else {
        labeled
    };
    Ok(Enumeration { partitions, count, count_up_to_iso, quotients })
}

const UNSET: u8 = 2;

#[derive(Clone)]
struct SearchState {
    assign: Vec<u8>,
    /// Assigned neighbors in `C` and in the complement.
    counts: Vec<[u16; 2]>,
    sizes: [usize; 2],
}

struct Backtracker<'a> {
    adjacency: &'a [Vec<u32>],
    /// `limits[label] = [S(label, C), S(label, complement)]`
    limits: [[u16; 2]; 2],
    caps: [usize; 2],
}

impl<'a> Backtracker<'a> {
    fn new(params: &GraphParams, adjacency: &'a [Vec<u32>], s: &QuotientMatrix) -> Result<Self> {
        let size = predicted_cell_size(s, params)?;
        let size = size.to_integer() as usize;
        let lim = |x: i64| u16::try_from(x).map_err(|_| Error::InvalidQuotient(format!("entry {x} out of range")));
        Ok(Backtracker {
            adjacency,
            limits: [[lim(s.get(0, 0))?, lim(s.get(0, 1))?], [lim(s.get(1, 0))?, lim(s.get(1, 1))?]],
            caps: [size, params.vertex_count() - size],
        })
    }

    fn fits(&self, label: u8, counts: [u16; 2]) -> bool {
        let l = self.limits[label as usize];
        counts[0] <= l[0] && counts[1] <= l[1]
    }

    fn assign(&self, st: &mut SearchState, v: usize, label: u8) -> bool {
        if st.sizes[label as usize] >= self.caps[label as usize] || !self.fits(label, st.counts[v]) {
            return false;
        }
        st.assign[v] = label;
        st.sizes[label as usize] += 1;
        for &w in &self.adjacency[v] {
            st.counts[w as usize][label as usize] += 1;
        }
        let ok = self.adjacency[v].iter().all(|&w| {
            let (a, c) = (st.assign[w as usize], st.counts[w as usize]);
            if a == UNSET {
                self.fits(0, c) || self.fits(1, c)
            } else {
                self.fits(a, c)
            }
        });
        if !ok {
            self.unassign(st, v);
        }
        ok
    }

    fn unassign(&self, st: &mut SearchState, v: usize) {
        let label = st.assign[v];
        for &w in &self.adjacency[v] {
            st.counts[w as usize][label as usize] -= 1;
        }
        st.sizes[label as usize] -= 1;
        st.assign[v] = UNSET;
    }

    /// Depth-first search from `v`; stops descending at `stop` and hands the
    /// state to `emit`.
    fn dfs(&self, st: &mut SearchState, v: usize, stop: usize, emit: &mut dyn FnMut(&SearchState)) {
        if v == stop {
            emit(st);
            return;
        }
        for label in [0u8, 1] {
            if self.assign(st, v, label) {
                self.dfs(st, v + 1, stop, emit);
                self.unassign(st, v);
            }
        }
    }

    fn run(&self) -> Vec<Bitset> {
        let nv = self.adjacency.len();
        let mut root = SearchState { assign: vec![UNSET; nv], counts: vec![[0, 0]; nv], sizes: [0, 0] };
        let depth = SHARD_DEPTH.min(nv);
        let mut shards = Vec::new();
        self.dfs(&mut root, 0, depth, &mut |st| shards.push(st.clone()));
        let found = parallel::map_slice(&shards, |shard| {
            let mut st = shard.clone();
            let mut cells = Vec::new();
            self.dfs(&mut st, depth, nv, &mut |done| {
                let mut cell = Bitset::new(nv);
                for (v, &a) in done.assign.iter().enumerate() {
                    if a == 0 {
                        cell.insert(v);
                    }
                }
                cells.push(cell);
            });
            cells
        });
        found.into_iter().flatten().collect()
    }
}
