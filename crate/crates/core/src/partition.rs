//! Partitions of H(n,q) and their exact verification: quotient matrices,
//! spectral certificates, the orthogonal-array fiber count, essential
//! coordinates, reduction and extension, and distance partitions.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::bitset::Bitset;
use crate::error::{Error, Result};
use crate::hamming::{Automorphism, GraphParams};
use crate::parallel;

/// An ordered 2-partition `(C, C̄)`; only `C` is stored.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TwoPartition {
    params: GraphParams,
    cell: Bitset,
}

impl fmt::Debug for TwoPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TwoPartition(H({},{}), {})", self.params.n(), self.params.q(), self.cell.to_hex())
    }
}

impl TwoPartition {
    pub fn new(params: GraphParams, cell: Bitset) -> Result<Self> {
        if cell.len() != params.vertex_count() {
            return Err(Error::InvalidPartition(format!(
                "cell bitset has length {}, expected {}",
                cell.len(),
                params.vertex_count()
            )));
        }
        let size = cell.count_ones();
        if size == 0 || size == params.vertex_count() {
            return Err(Error::InvalidPartition("both cells must be nonempty".into()));
        }
        Ok(TwoPartition { params, cell })
    }

    pub fn from_vertices<I: IntoIterator<Item = usize>>(params: GraphParams, vertices: I) -> Result<Self> {
        let cell = Bitset::from_indices(params.vertex_count(), vertices)?;
        Self::new(params, cell)
    }

    pub fn from_tuples(params: GraphParams, tuples: &[Vec<usize>]) -> Result<Self> {
        let vs = tuples.iter().map(|t| params.encode(t)).collect::<Result<Vec<_>>>()?;
        Self::from_vertices(params, vs)
    }

    /// `C = {x : pred(x)}` over decoded tuples.
    pub fn from_predicate<F: Fn(&[usize]) -> bool>(params: GraphParams, pred: F) -> Result<Self> {
        let mut cell = Bitset::new(params.vertex_count());
        for v in 0..params.vertex_count() {
            if pred(&params.decode(v)?) {
                cell.insert(v);
            }
        }
        Self::new(params, cell)
    }

    pub fn params(&self) -> &GraphParams {
        &self.params
    }

    pub fn cell(&self) -> &Bitset {
        &self.cell
    }

    pub fn into_cell(self) -> Bitset {
        self.cell
    }

    #[inline]
    pub fn contains(&self, v: usize) -> bool {
        self.cell.contains(v)
    }

    pub fn size(&self) -> usize {
        self.cell.count_ones()
    }

    pub fn vertices(&self) -> Vec<usize> {
        self.cell.ones().collect()
    }

    /// `(C̄, C)`.
    pub fn complement(&self) -> TwoPartition {
        TwoPartition { params: self.params.clone(), cell: self.cell.complement() }
    }

    /// Characteristic function of `C`.
    pub fn indicator(&self) -> Vec<i64> {
        (0..self.params.vertex_count()).map(|v| self.contains(v) as i64).collect()
    }

    /// The image partition `{g(v) : v ∈ C}`.
    pub fn apply_automorphism(&self, g: &Automorphism) -> Result<TwoPartition> {
        let map = g.vertex_map(&self.params)?;
        let mut cell = Bitset::new(self.params.vertex_count());
        for v in self.cell.ones() {
            cell.insert(map[v]);
        }
        Ok(TwoPartition { params: self.params.clone(), cell })
    }

    /// Number of neighbors of `v` in `C`.
    pub fn neighbors_in_cell(&self, v: usize) -> usize {
        self.params.neighbors_unchecked(v).filter(|&(_, u)| self.contains(u)).count()
    }
}

/// An ordered r-partition given by a total labeling `vertex -> cell`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RPartition {
    params: GraphParams,
    labels: Vec<u32>,
    r: usize,
}

impl RPartition {
    pub fn new(params: GraphParams, labels: Vec<u32>) -> Result<Self> {
        if labels.len() != params.vertex_count() {
            return Err(Error::InvalidPartition(format!(
                "labeling has length {}, expected {}",
                labels.len(),
                params.vertex_count()
            )));
        }
        let r = labels.iter().max().map_or(0, |&m| m as usize + 1);
        if r < 2 {
            return Err(Error::InvalidPartition("need at least two cells".into()));
        }
        let mut seen = vec![false; r];
        for &l in &labels {
            seen[l as usize] = true;
        }
        if let Some(empty) = seen.iter().position(|s| !s) {
            return Err(Error::InvalidPartition(format!("cell {empty} is empty")));
        }
        Ok(RPartition { params, labels, r })
    }

    pub fn params(&self) -> &GraphParams {
        &self.params
    }

    pub fn labels(&self) -> &[u32] {
        &self.labels
    }

    pub fn cell_count(&self) -> usize {
        self.r
    }

    pub fn cell_size(&self, c: usize) -> usize {
        self.labels.iter().filter(|&&l| l as usize == c).count()
    }

    /// Collapses to `(C_0, rest)` when `r == 2`.
    pub fn to_two_partition(&self) -> Result<TwoPartition> {
        if self.r != 2 {
            return Err(Error::InvalidPartition(format!("partition has {} cells, not 2", self.r)));
        }
        TwoPartition::from_vertices(
            self.params.clone(),
            self.labels.iter().enumerate().filter(|(_, &l)| l == 0).map(|(v, _)| v),
        )
    }
}

impl From<&TwoPartition> for RPartition {
    fn from(p: &TwoPartition) -> Self {
        RPartition {
            params: p.params.clone(),
            labels: (0..p.params.vertex_count()).map(|v| (!p.contains(v)) as u32).collect(),
            r: 2,
        }
    }
}

/// Anything that assigns every vertex of H(n,q) to one of `cell_count()` cells.
pub trait Cells: Sync {
    fn params(&self) -> &GraphParams;
    fn cell_count(&self) -> usize;
    fn label(&self, v: usize) -> usize;
}

impl Cells for TwoPartition {
    fn params(&self) -> &GraphParams {
        &self.params
    }
    fn cell_count(&self) -> usize {
        2
    }
    #[inline]
    fn label(&self, v: usize) -> usize {
        (!self.contains(v)) as usize
    }
}

impl Cells for RPartition {
    fn params(&self) -> &GraphParams {
        &self.params
    }
    fn cell_count(&self) -> usize {
        self.r
    }
    #[inline]
    fn label(&self, v: usize) -> usize {
        self.labels[v] as usize
    }
}

/// Exact `r x r` quotient matrix; entry `(i, j)` counts neighbors in cell `j`
/// of any vertex of cell `i`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<i64>>", into = "Vec<Vec<i64>>")]
pub struct QuotientMatrix {
    r: usize,
    entries: Vec<i64>,
}

impl fmt::Debug for QuotientMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.rows())
    }
}

impl fmt::Display for QuotientMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .rows()
            .iter()
            .map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","))
            .collect();
        write!(f, "[{}]", rows.join(";"))
    }
}

impl TryFrom<Vec<Vec<i64>>> for QuotientMatrix {
    type Error = Error;
    fn try_from(rows: Vec<Vec<i64>>) -> Result<Self> {
        QuotientMatrix::new(rows)
    }
}

impl From<QuotientMatrix> for Vec<Vec<i64>> {
    fn from(s: QuotientMatrix) -> Self {
        s.rows()
    }
}

impl QuotientMatrix {
    pub fn new(rows: Vec<Vec<i64>>) -> Result<Self> {
        let r = rows.len();
        if r == 0 {
            return Err(Error::InvalidQuotient("empty matrix".into()));
        }
        if rows.iter().any(|row| row.len() != r) {
            return Err(Error::InvalidQuotient("matrix is not square".into()));
        }
        if rows.iter().flatten().any(|&x| x < 0) {
            return Err(Error::InvalidQuotient("negative entry".into()));
        }
        Ok(QuotientMatrix { r, entries: rows.into_iter().flatten().collect() })
    }

    pub fn two(s11: i64, s12: i64, s21: i64, s22: i64) -> Result<Self> {
        Self::new(vec![vec![s11, s12], vec![s21, s22]])
    }

    /// Parses `"a,b;c,d"`.
    pub fn parse(s: &str) -> Result<Self> {
        let rows = s
            .split(';')
            .map(|row| {
                row.split(',')
                    .map(|x| {
                        x.trim()
                            .parse::<i64>()
                            .map_err(|e| Error::Format(format!("bad quotient entry {x:?}: {e}")))
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(rows)
    }

    pub fn size(&self) -> usize {
        self.r
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.entries[i * self.r + j]
    }

    pub fn rows(&self) -> Vec<Vec<i64>> {
        self.entries.chunks(self.r).map(|c| c.to_vec()).collect()
    }

    /// Checks every row sums to the valency of H(n,q).
    pub fn check_row_sums(&self, params: &GraphParams) -> Result<()> {
        let deg = params.degree() as i64;
        for (i, row) in self.entries.chunks(self.r).enumerate() {
            let sum: i64 = row.iter().sum();
            if sum != deg {
                return Err(Error::InvalidQuotient(format!(
                    "row {i} sums to {sum}, expected degree {deg}"
                )));
            }
        }
        Ok(())
    }

    fn require_two(&self) -> Result<()> {
        if self.r != 2 {
            return Err(Error::InvalidQuotient(format!("expected a 2x2 matrix, got {}x{}", self.r, self.r)));
        }
        Ok(())
    }

    /// The matrix with `d` added to every diagonal entry.
    pub fn shift_diagonal(&self, d: i64) -> QuotientMatrix {
        let mut out = self.clone();
        for i in 0..self.r {
            out.entries[i * self.r + i] += d;
        }
        out
    }

    /// `det(S - λI)` by fraction-free elimination.
    pub fn characteristic_value(&self, lambda: i64) -> i128 {
        let r = self.r;
        let mut m: Vec<Vec<i128>> = (0..r)
            .map(|i| {
                (0..r)
                    .map(|j| self.get(i, j) as i128 - if i == j { lambda as i128 } else { 0 })
                    .collect()
            })
            .collect();
        let mut sign = 1i128;
        let mut prev = 1i128;
        for k in 0..r {
            if m[k][k] == 0 {
                match (k + 1..r).find(|&i| m[i][k] != 0) {
                    Some(i) => {
                        m.swap(i, k);
                        sign = -sign;
                    }
                    None => return 0,
                }
            }
            for i in k + 1..r {
                for j in k + 1..r {
                    m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
                }
                m[i][k] = 0;
            }
            prev = m[k][k];
        }
        sign * m[r - 1][r - 1]
    }
}

/// Verdict of [`equitable_check`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Equitability {
    Equitable(QuotientMatrix),
    /// Two vertices of one cell with different neighbor counts into `target_cell`;
    /// the first is the earliest vertex of its cell, the second the first offender.
    NotEquitable { witness: (usize, usize), target_cell: usize },
}

impl Equitability {
    pub fn quotient(&self) -> Option<&QuotientMatrix> {
        match self {
            Equitability::Equitable(s) => Some(s),
            Equitability::NotEquitable { .. } => None,
        }
    }

    pub fn is_equitable(&self) -> bool {
        matches!(self, Equitability::Equitable(_))
    }
}

fn neighbor_counts<P: Cells + ?Sized>(p: &P, v: usize) -> Vec<u32> {
    let mut counts = vec![0u32; p.cell_count()];
    for (_, u) in p.params().neighbors_unchecked(v) {
        counts[p.label(u)] += 1;
    }
    counts
}

/// Exhaustive equitability check. On failure the witness is the first
/// offending vertex in index order, paired with the earliest vertex of its cell.
pub fn equitable_check<P: Cells + ?Sized>(p: &P) -> Equitability {
    let params = p.params();
    let r = p.cell_count();
    let counts = parallel::map_range(0..params.vertex_count() as u64, |v| neighbor_counts(p, v as usize));
    let mut reference: Vec<Option<usize>> = vec![None; r];
    for (v, c) in counts.iter().enumerate() {
        let cell = p.label(v);
        match reference[cell] {
            None => reference[cell] = Some(v),
            Some(w) => {
                if let Some(target) = (0..r).find(|&j| counts[w][j] != c[j]) {
                    return Equitability::NotEquitable { witness: (w, v), target_cell: target };
                }
            }
        }
    }
    let rows = (0..r)
        .map(|i| {
            let w = reference[i].expect("every cell is nonempty");
            counts[w].iter().map(|&x| x as i64).collect()
        })
        .collect();
    Equitability::Equitable(QuotientMatrix::new(rows).expect("counts are a valid matrix"))
}

/// Eigenvalues `(n(q-1), S11 - S21)` of a 2x2 quotient matrix.
pub fn quotient_eigenvalues(s: &QuotientMatrix, params: &GraphParams) -> Result<(i64, i64)> {
    s.require_two()?;
    s.check_row_sums(params)?;
    Ok((params.degree() as i64, s.get(0, 0) - s.get(1, 0)))
}

/// Indices `i` such that `λ_i(n,q)` is an eigenvalue of `s`.
pub fn eigenvalue_indices(s: &QuotientMatrix, params: &GraphParams) -> BTreeSet<usize> {
    (0..=params.n())
        .filter(|&i| s.characteristic_value(params.eigenvalue(i).unwrap()) == 0)
        .collect()
}

/// Index of the second eigenvalue `S11 - S21` of a 2x2 quotient matrix.
pub fn second_eigenvalue_index(s: &QuotientMatrix, params: &GraphParams) -> Result<Option<usize>> {
    let (_, lambda) = quotient_eigenvalues(s, params)?;
    Ok(params.eigenvalue_index(lambda))
}

/// `|C| = q^n S21 / (S12 + S21)` in lowest terms.
pub fn predicted_cell_size(s: &QuotientMatrix, params: &GraphParams) -> Result<Ratio<i64>> {
    s.require_two()?;
    let denom = s.get(0, 1) + s.get(1, 0);
    if denom == 0 {
        return Err(Error::InvalidQuotient("S12 + S21 = 0".into()));
    }
    Ok(Ratio::new(params.vertex_count() as i64 * s.get(1, 0), denom))
}

/// Verdict of [`orthogonal_array_check`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OaVerdict {
    /// Every fiber `{x ∈ C : x_k = a}` has `count` elements.
    Pass { count: Ratio<i64> },
    Fail { coordinate: usize, symbol: usize, count: usize, expected: Ratio<i64> },
}

/// Checks `|{x ∈ C : x_k = a}| = S21 q^(n-2) / 2` for every coordinate and
/// symbol. Requires `S11 - S21 = λ_2(n,q)`.
pub fn orthogonal_array_check(p: &TwoPartition, s: &QuotientMatrix) -> Result<OaVerdict> {
    let params = p.params();
    let (_, lambda) = quotient_eigenvalues(s, params)?;
    if params.n() < 2 || lambda != params.eigenvalue(2)? {
        return Err(Error::Precondition(format!(
            "second quotient eigenvalue {lambda} is not λ_2(n,q)"
        )));
    }
    let expected = Ratio::new(s.get(1, 0) * (params.q() as i64).pow(params.n() as u32 - 2), 2);
    let mut fibers = vec![vec![0usize; params.q()]; params.n()];
    for v in p.cell().ones() {
        for (k, fiber) in fibers.iter_mut().enumerate() {
            fiber[params.digit(v, k)] += 1;
        }
    }
    for (k, fiber) in fibers.iter().enumerate() {
        for (a, &count) in fiber.iter().enumerate() {
            if Ratio::from_integer(count as i64) != expected {
                return Ok(OaVerdict::Fail { coordinate: k, symbol: a, count, expected });
            }
        }
    }
    Ok(OaVerdict::Pass { count: expected })
}

/// Coordinates along which `f` changes between some pair of adjacent vertices.
pub fn essential_coordinates_of<T: PartialEq, F: Fn(usize) -> T>(params: &GraphParams, f: F) -> BTreeSet<usize> {
    (0..params.n())
        .filter(|&k| {
            let stride = params.stride(k);
            (0..params.vertex_count())
                .filter(|&v| params.digit(v, k) == 0)
                .any(|v| {
                    let base = f(v);
                    (1..params.q()).any(|a| f(v + a * stride) != base)
                })
        })
        .collect()
}

pub fn essential_coordinates(p: &TwoPartition) -> BTreeSet<usize> {
    essential_coordinates_of(p.params(), |v| p.contains(v))
}

pub fn is_reduced(p: &TwoPartition) -> bool {
    essential_coordinates(p).len() == p.params().n()
}

/// Projects onto the coordinates in `keep` (ascending), reading each value at
/// the vertex whose other coordinates are `0`.
pub(crate) fn project(params: &GraphParams, keep: &[usize], f: impl Fn(usize) -> bool) -> Result<(GraphParams, Bitset)> {
    let out = GraphParams::new(keep.len(), params.q())?;
    let mut cell = Bitset::new(out.vertex_count());
    for y in 0..out.vertex_count() {
        let x: usize = keep.iter().enumerate().map(|(j, &k)| out.digit(y, j) * params.stride(k)).sum();
        if f(x) {
            cell.insert(y);
        }
    }
    Ok((out, cell))
}

/// Deletes every nonessential coordinate. Returns the reduced partition of
/// H(n-d,q) and the deleted coordinates in descending order.
pub fn reduce(p: &TwoPartition) -> Result<(TwoPartition, Vec<usize>)> {
    let essential = essential_coordinates(p);
    if essential.is_empty() {
        return Err(Error::Precondition("partition has no essential coordinate".into()));
    }
    let keep: Vec<usize> = essential.iter().copied().collect();
    let removed: Vec<usize> = (0..p.params().n()).rev().filter(|k| !essential.contains(k)).collect();
    let (params, cell) = project(p.params(), &keep, |v| p.contains(v))?;
    Ok((TwoPartition::new(params, cell)?, removed))
}

/// `C × A^d`: appends `d` nonessential coordinates.
pub fn extend(p: &TwoPartition, d: usize) -> Result<TwoPartition> {
    if d == 0 {
        return Ok(p.clone());
    }
    let params = GraphParams::new(p.params().n() + d, p.params().q())?;
    let block = params.vertex_count() / p.params().vertex_count();
    let mut cell = Bitset::new(params.vertex_count());
    for v in p.cell().ones() {
        for t in 0..block {
            cell.insert(v * block + t);
        }
    }
    TwoPartition::new(params, cell)
}

/// Verdict of [`spectral_check`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SpectralVerdict {
    /// `(A - λI)χ_C` is the constant `value`.
    Pass { value: i64 },
    /// `(A - λI)χ_C` differs at these two vertices.
    Fail { witness: (usize, usize) },
}

impl SpectralVerdict {
    pub fn passed(&self) -> bool {
        matches!(self, SpectralVerdict::Pass { .. })
    }
}

/// Checks that `(A - λI)χ_C` is constant, i.e. `χ_C` is a constant plus a
/// λ-eigenfunction.
pub fn spectral_check(p: &TwoPartition, lambda: i64) -> SpectralVerdict {
    let residual = parallel::map_range(0..p.params().vertex_count() as u64, |v| {
        let v = v as usize;
        p.neighbors_in_cell(v) as i64 - lambda * p.contains(v) as i64
    });
    match residual.iter().position(|&x| x != residual[0]) {
        None => SpectralVerdict::Pass { value: residual[0] },
        Some(v) => SpectralVerdict::Fail { witness: (0, v) },
    }
}

/// Verdict of [`distance_partition_check`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DistanceVerdict {
    /// The distance partition is equitable with this (tridiagonal) quotient.
    CompletelyRegular(QuotientMatrix),
    NotCompletelyRegular { witness: (usize, usize), target_cell: usize },
}

/// Distance classes from `code` by breadth-first layering.
pub fn distance_partition(params: &GraphParams, code: &[usize]) -> Result<RPartition> {
    if code.is_empty() {
        return Err(Error::Precondition("code must be nonempty".into()));
    }
    let mut dist = vec![u32::MAX; params.vertex_count()];
    let mut queue = VecDeque::new();
    for &c in code {
        params.check_vertex(c)?;
        if dist[c] != 0 {
            dist[c] = 0;
            queue.push_back(c);
        }
    }
    while let Some(v) = queue.pop_front() {
        for (_, u) in params.neighbors_unchecked(v) {
            if dist[u] == u32::MAX {
                dist[u] = dist[v] + 1;
                queue.push_back(u);
            }
        }
    }
    if code.len() == params.vertex_count() || dist.iter().all(|&d| d == 0) {
        return Err(Error::Precondition("code covers the whole vertex set".into()));
    }
    RPartition::new(params.clone(), dist)
}

/// Is `code` a completely regular code?
pub fn distance_partition_check(params: &GraphParams, code: &[usize]) -> Result<DistanceVerdict> {
    let part = distance_partition(params, code)?;
    Ok(match equitable_check(&part) {
        Equitability::Equitable(s) => DistanceVerdict::CompletelyRegular(s),
        Equitability::NotEquitable { witness, target_cell } => {
            DistanceVerdict::NotCompletelyRegular { witness, target_cell }
        }
    })
}
