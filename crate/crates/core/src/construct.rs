//! Generators of equitable 2-partitions with the second eigenvalue: the
//! balanced-clique check on `K_q □ K_q'`, permutation switching, alphabet
//! lifting, and the pair of induced 8-cycles in H(4,2).
//!
//! Every constructor re-verifies its output with
//! [`equitable_check`](crate::partition::equitable_check) and returns
//! [`Error::Reverification`] on mismatch.

use std::collections::VecDeque;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::bitset::Bitset;
use crate::eigen::{complement_set, SymbolSet};
use crate::error::{Error, Result};
use crate::hamming::GraphParams;
use crate::partition::{
    eigenvalue_indices, equitable_check, extend, second_eigenvalue_index, Cells, Equitability, QuotientMatrix,
    RPartition, TwoPartition,
};

/// Parses `"0,1|2,3"` into ordered blocks.
pub fn parse_blocks(s: &str) -> Result<Vec<SymbolSet>> {
    s.split('|')
        .map(|block| {
            block
                .split(',')
                .filter(|t| !t.trim().is_empty())
                .map(|t| {
                    t.trim()
                        .parse::<usize>()
                        .map_err(|e| Error::Format(format!("bad symbol {t:?}: {e}")))
                })
                .collect::<Result<SymbolSet>>()
        })
        .collect()
}

pub fn format_blocks(blocks: &[SymbolSet]) -> String {
    blocks
        .iter()
        .map(|b| b.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(","))
        .collect::<Vec<_>>()
        .join("|")
}

fn validate_cover(q: usize, blocks: &[SymbolSet]) -> Result<Vec<usize>> {
    let mut owner = vec![usize::MAX; q];
    for (i, block) in blocks.iter().enumerate() {
        if block.is_empty() {
            return Err(Error::InvalidBlocks(format!("block {i} is empty")));
        }
        for &s in block {
            if s >= q {
                return Err(Error::InvalidBlocks(format!("symbol {s} outside alphabet of size {q}")));
            }
            if owner[s] != usize::MAX {
                return Err(Error::InvalidBlocks(format!("symbol {s} appears in two blocks")));
            }
            owner[s] = i;
        }
    }
    if let Some(s) = owner.iter().position(|&o| o == usize::MAX) {
        return Err(Error::InvalidBlocks(format!("symbol {s} is not covered")));
    }
    Ok(owner)
}

/// An ordered partition `A_1, .., A_{n-1}` of the alphabet into nonempty blocks.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AlphabetBlocks {
    q: usize,
    blocks: Vec<SymbolSet>,
    #[serde(skip)]
    owner: Vec<usize>,
}

impl AlphabetBlocks {
    pub fn new(q: usize, blocks: Vec<SymbolSet>) -> Result<Self> {
        let owner = validate_cover(q, &blocks)?;
        Ok(AlphabetBlocks { q, blocks, owner })
    }

    pub fn parse(q: usize, s: &str) -> Result<Self> {
        Self::new(q, parse_blocks(s)?)
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn blocks(&self) -> &[SymbolSet] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn block_of(&self, symbol: usize) -> usize {
        self.owner[symbol]
    }
}

/// An ordered partition `A_0, .., A_{q'-1}` of `{0,..,q-1}` into blocks of equal size.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LiftBlocks {
    q: usize,
    blocks: Vec<SymbolSet>,
    #[serde(skip)]
    owner: Vec<usize>,
}

impl LiftBlocks {
    pub fn new(q: usize, blocks: Vec<SymbolSet>) -> Result<Self> {
        let owner = validate_cover(q, &blocks)?;
        let m = blocks[0].len();
        if blocks.iter().any(|b| b.len() != m) {
            return Err(Error::InvalidBlocks("lift blocks must have equal sizes".into()));
        }
        if blocks.len() < 2 {
            return Err(Error::InvalidBlocks("need at least two lift blocks".into()));
        }
        Ok(LiftBlocks { q, blocks, owner })
    }

    /// Infers `q` from the union of the blocks.
    pub fn parse(s: &str) -> Result<Self> {
        let blocks = parse_blocks(s)?;
        let q = blocks.iter().map(|b| b.len()).sum();
        Self::new(q, blocks)
    }

    pub fn q(&self) -> usize {
        self.q
    }

    /// The smaller alphabet size `q'`.
    pub fn base_q(&self) -> usize {
        self.blocks.len()
    }

    /// Block size `m = q / q'`.
    pub fn multiplicity(&self) -> usize {
        self.blocks[0].len()
    }

    pub fn blocks(&self) -> &[SymbolSet] {
        &self.blocks
    }

    pub fn block_of(&self, symbol: usize) -> usize {
        self.owner[symbol]
    }
}

/// A maximal clique of `K_q □ K_q'`: a row `{a} × [q']` or a column `[q] × {b}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GridClique {
    Row(usize),
    Column(usize),
}

/// Verdict of [`prop2_check`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Prop2Verdict {
    /// Every maximal clique meets the cell in the fraction `ratio`.
    Pass { quotient: QuotientMatrix, ratio: Ratio<i64> },
    Fail { clique: GridClique, ratio: Ratio<i64>, expected: Ratio<i64> },
}

fn grid_index(q2: usize, a: usize, b: usize) -> usize {
    a * q2 + b
}

fn check_grid(q: usize, q2: usize, cell: &Bitset) -> Result<()> {
    if q < 2 || q2 < 2 {
        return Err(Error::Precondition("grid sides must be at least 2".into()));
    }
    if cell.len() != q * q2 {
        return Err(Error::InvalidPartition(format!("grid cell has length {}, expected {}", cell.len(), q * q2)));
    }
    let size = cell.count_ones();
    if size == 0 || size == q * q2 {
        return Err(Error::InvalidPartition("both cells must be nonempty".into()));
    }
    Ok(())
}

/// Equitability of `(C, C̄)` in `K_q □ K_q'`; vertex `(a, b)` has index `a q' + b`.
pub fn grid_equitable_check(q: usize, q2: usize, cell: &Bitset) -> Result<Equitability> {
    check_grid(q, q2, cell)?;
    let counts: Vec<usize> = (0..q * q2)
        .map(|v| {
            let (a, b) = (v / q2, v % q2);
            let row = (0..q2).filter(|&c| c != b && cell.contains(grid_index(q2, a, c))).count();
            let col = (0..q).filter(|&c| c != a && cell.contains(grid_index(q2, c, b))).count();
            row + col
        })
        .collect();
    let deg = (q + q2 - 2) as i64;
    let mut reference = [None; 2];
    for (v, &c) in counts.iter().enumerate() {
        let label = (!cell.contains(v)) as usize;
        match reference[label] {
            None => reference[label] = Some(v),
            Some(w) if counts[w] != c => {
                return Ok(Equitability::NotEquitable { witness: (w, v), target_cell: 0 });
            }
            _ => {}
        }
    }
    let s11 = counts[reference[0].unwrap()] as i64;
    let s21 = counts[reference[1].unwrap()] as i64;
    Ok(Equitability::Equitable(QuotientMatrix::two(s11, deg - s11, s21, deg - s21)?))
}

/// Checks that every maximal clique of `K_q □ K_q'` meets `C` in the same
/// fraction; on success the partition is equitable with eigenvalue `-2` and
/// the fraction equals `S21 / (q + q')`.
pub fn prop2_check(q: usize, q2: usize, cell: &Bitset) -> Result<Prop2Verdict> {
    check_grid(q, q2, cell)?;
    let mut cliques = Vec::with_capacity(q + q2);
    for a in 0..q {
        let hits = (0..q2).filter(|&b| cell.contains(grid_index(q2, a, b))).count();
        cliques.push((GridClique::Row(a), Ratio::new(hits as i64, q2 as i64)));
    }
    for b in 0..q2 {
        let hits = (0..q).filter(|&a| cell.contains(grid_index(q2, a, b))).count();
        cliques.push((GridClique::Column(b), Ratio::new(hits as i64, q as i64)));
    }
    let expected = cliques[0].1;
    if let Some(&(clique, ratio)) = cliques.iter().find(|(_, r)| *r != expected) {
        return Ok(Prop2Verdict::Fail { clique, ratio, expected });
    }
    let quotient = match grid_equitable_check(q, q2, cell)? {
        Equitability::Equitable(s) => s,
        Equitability::NotEquitable { .. } => {
            return Err(Error::Reverification("balanced grid partition is not equitable".into()))
        }
    };
    if quotient.get(0, 0) - quotient.get(1, 0) != -2
        || Ratio::new(quotient.get(1, 0), (q + q2) as i64) != expected
    {
        return Err(Error::Reverification(format!("balanced grid partition has quotient {quotient}")));
    }
    Ok(Prop2Verdict::Pass { quotient, ratio: expected })
}

/// Checks the switching condition on a base partition of H(2,q): every row
/// `{a} × A` and every block column `A_i × {b}` meets `C` in one common
/// fraction, which is returned.
pub fn check_switching_base(base: &TwoPartition, blocks: &AlphabetBlocks) -> Result<Ratio<i64>> {
    let params = base.params();
    if params.n() != 2 || params.q() != blocks.q() {
        return Err(Error::Precondition(format!(
            "switching base must live on H(2,{}), got H({},{})",
            blocks.q(),
            params.n(),
            params.q()
        )));
    }
    let q = params.q();
    let at = |a: usize, b: usize| base.contains(a * q + b);
    let mut common: Option<Ratio<i64>> = None;
    let mut check = |what: String, ratio: Ratio<i64>| -> Result<()> {
        match common {
            None => {
                common = Some(ratio);
                Ok(())
            }
            Some(c) if c == ratio => Ok(()),
            Some(c) => Err(Error::Precondition(format!(
                "switching base is unbalanced: {what} has ratio {ratio}, expected {c}"
            ))),
        }
    };
    for (i, block) in blocks.blocks().iter().enumerate() {
        for &a in block {
            let hits = (0..q).filter(|&b| at(a, b)).count();
            check(format!("row {a}"), Ratio::new(hits as i64, q as i64))?;
        }
        for b in 0..q {
            let hits = block.iter().filter(|&&a| at(a, b)).count();
            check(format!("column {b} of block {i}"), Ratio::new(hits as i64, block.len() as i64))?;
        }
    }
    Ok(common.expect("at least one block"))
}

/// Applies the coordinate transposition `(1, i+1)` to the slice of `C` whose
/// coordinate 0 lies in block `i` (block 0 is left unchanged). No balance
/// check and no verification.
pub fn permutation_switch(extended: &TwoPartition, blocks: &AlphabetBlocks) -> Result<TwoPartition> {
    let params = extended.params();
    if params.n() != blocks.len() + 1 {
        return Err(Error::Precondition(format!(
            "{} blocks need H({},q), got H({},q)",
            blocks.len(),
            blocks.len() + 1,
            params.n()
        )));
    }
    if params.q() != blocks.q() {
        return Err(Error::ParamsMismatch("alphabet size of blocks and partition differ".into()));
    }
    let mut cell = Bitset::new(params.vertex_count());
    for v in extended.cell().ones() {
        let i = blocks.block_of(params.digit(v, 0));
        let image = if i == 0 {
            v
        } else {
            let (x1, xi) = (params.digit(v, 1), params.digit(v, i + 1));
            params.with_digit(params.with_digit(v, 1, xi), i + 1, x1)
        };
        cell.insert(image);
    }
    TwoPartition::new(params.clone(), cell)
}

/// Permutation switching: extends `base` (on H(2,q)) to H(n,q) with
/// `n = blocks.len() + 1` and switches coordinates block by block. The
/// output has the quotient matrix of the plain extension.
pub fn construct_a(blocks: &AlphabetBlocks, base: &TwoPartition) -> Result<TwoPartition> {
    check_switching_base(base, blocks)?;
    let n = blocks.len() + 1;
    let extended = extend(base, n - 2)?;
    let target = equitable_check(&extended)
        .quotient()
        .cloned()
        .ok_or_else(|| Error::Reverification("extended base is not equitable".into()))?;
    let out = permutation_switch(&extended, blocks)?;
    match equitable_check(&out) {
        Equitability::Equitable(s) if s == target => Ok(out),
        other => Err(Error::Reverification(format!(
            "switched partition gives {other:?}, expected quotient {target}"
        ))),
    }
}

/// Replaces each symbol of H(n,q') by a block: cell `D_i` is the union of
/// `A_{x_1} × .. × A_{x_n}` over `x ∈ C_i`.
pub fn alphabet_lift(p: &RPartition, lift: &LiftBlocks) -> Result<RPartition> {
    let base = p.params();
    if base.q() != lift.base_q() {
        return Err(Error::ParamsMismatch(format!(
            "partition alphabet {} but {} lift blocks",
            base.q(),
            lift.base_q()
        )));
    }
    let s_in = equitable_check(p)
        .quotient()
        .cloned()
        .ok_or_else(|| Error::Precondition("lifted partition must be equitable".into()))?;
    let params = GraphParams::new(base.n(), lift.q())?;
    let labels = (0..params.vertex_count())
        .map(|y| {
            let x: usize = (0..params.n()).map(|k| lift.block_of(params.digit(y, k)) * base.stride(k)).sum();
            p.label(x) as u32
        })
        .collect();
    let out = RPartition::new(params.clone(), labels)?;
    let s_out = equitable_check(&out)
        .quotient()
        .cloned()
        .ok_or_else(|| Error::Reverification("lifted partition is not equitable".into()))?;
    if eigenvalue_indices(&s_out, &params) != eigenvalue_indices(&s_in, base) {
        return Err(Error::Reverification(format!(
            "eigenvalue indices changed under lifting: {s_in} -> {s_out}"
        )));
    }
    Ok(out)
}

pub fn alphabet_lift_two(p: &TwoPartition, lift: &LiftBlocks) -> Result<TwoPartition> {
    alphabet_lift(&RPartition::from(p), lift)?.to_two_partition()
}

/// Lifts a partition of H(4,2) into two induced 8-cycles to H(4,q) with the
/// split `A_0 = a0`, `A_1 = complement`.
pub fn construct_b(q: usize, a0: &SymbolSet, cycle_pair: &TwoPartition) -> Result<TwoPartition> {
    if !q.is_multiple_of(2) {
        return Err(Error::Precondition(format!("construction needs even q, got {q}")));
    }
    if a0.len() * 2 != q {
        return Err(Error::Precondition(format!("split block must have {} symbols", q / 2)));
    }
    let h42 = GraphParams::new(4, 2)?;
    if cycle_pair.params() != &h42 {
        return Err(Error::Precondition("cycle pair must partition H(4,2)".into()));
    }
    for (name, part) in [("C", cycle_pair.clone()), ("complement", cycle_pair.complement())] {
        if is_induced_cycle(&h42, &part.vertices()) != (CycleVerdict::Pass { length: 8 }) {
            return Err(Error::Precondition(format!("cell {name} is not an induced 8-cycle")));
        }
    }
    let lift = LiftBlocks::new(q, vec![a0.clone(), complement_set(q, a0)])?;
    let out = alphabet_lift_two(cycle_pair, &lift)?;
    let params = out.params().clone();
    let s = equitable_check(&out)
        .quotient()
        .cloned()
        .ok_or_else(|| Error::Reverification("lifted cycle pair is not equitable".into()))?;
    if second_eigenvalue_index(&s, &params)? != Some(2) {
        return Err(Error::Reverification(format!("lifted cycle pair has quotient {s}")));
    }
    Ok(out)
}

/// The partition of H(4,2) into the two induced 8-cycles
/// `0001-0011-0010-0110-1110-1100-1101-1001` and its complement.
pub fn eight_cycle_partition() -> TwoPartition {
    const CELL: [[usize; 4]; 8] = [
        [0, 0, 0, 1],
        [0, 0, 1, 1],
        [0, 0, 1, 0],
        [0, 1, 1, 0],
        [1, 1, 1, 0],
        [1, 1, 0, 0],
        [1, 1, 0, 1],
        [1, 0, 0, 1],
    ];
    let params = GraphParams::new(4, 2).expect("valid");
    let tuples: Vec<Vec<usize>> = CELL.iter().map(|t| t.to_vec()).collect();
    TwoPartition::from_tuples(params, &tuples).expect("valid cell")
}

/// Verdict of [`is_induced_cycle`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum CycleVerdict {
    Pass { length: usize },
    Fail,
}

/// Does `code` induce a connected 2-regular subgraph?
pub fn is_induced_cycle(params: &GraphParams, code: &[usize]) -> CycleVerdict {
    if code.len() < 3 || code.iter().any(|&v| v >= params.vertex_count()) {
        return CycleVerdict::Fail;
    }
    let Ok(members) = Bitset::from_indices(params.vertex_count(), code.iter().copied()) else {
        return CycleVerdict::Fail;
    };
    let size = members.count_ones();
    if size != code.len() {
        return CycleVerdict::Fail;
    }
    let inner = |v: usize| params.neighbors_unchecked(v).filter(|&(_, u)| members.contains(u)).map(|(_, u)| u);
    if code.iter().any(|&v| inner(v).count() != 2) {
        return CycleVerdict::Fail;
    }
    let mut seen = Bitset::new(params.vertex_count());
    let mut queue = VecDeque::from([code[0]]);
    seen.insert(code[0]);
    let mut reached = 1;
    while let Some(v) = queue.pop_front() {
        for u in inner(v) {
            if !seen.contains(u) {
                seen.insert(u);
                reached += 1;
                queue.push_back(u);
            }
        }
    }
    if reached == size {
        CycleVerdict::Pass { length: size }
    } else {
        CycleVerdict::Fail
    }
}
