//! Structural classifier for reduced equitable 2-partitions whose second
//! quotient eigenvalue is `λ_2(n,q)`: small base (`n <= 3`), lifted pair of
//! induced 8-cycles, or permutation switching.

use std::collections::{BTreeMap, BTreeSet};

use crate::bitset::Bitset;
use crate::construct::{construct_a, construct_b, is_induced_cycle, AlphabetBlocks, CycleVerdict};
use crate::eigen::{complement_set, SymbolSet};
use crate::error::{Error, Result};
use crate::hamming::{Automorphism, GraphParams};
use crate::partition::{
    equitable_check, essential_coordinates, essential_coordinates_of, second_eigenvalue_index, TwoPartition,
};

/// `construct_a(blocks, base)` mapped by `automorphism` equals the input.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstructionAMatch {
    pub blocks: AlphabetBlocks,
    pub base: TwoPartition,
    pub automorphism: Automorphism,
}

/// `construct_b(q, split, cycle_pair)` mapped by `automorphism` equals the input.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstructionBMatch {
    pub split: SymbolSet,
    pub cycle_pair: TwoPartition,
    pub automorphism: Automorphism,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Theorem5Tag {
    /// `n <= 3`; `secondary` records a permutation-switching match if one exists.
    SmallBase { secondary: Option<Box<ConstructionAMatch>> },
    ConstructionB(Box<ConstructionBMatch>),
    ConstructionA(Box<ConstructionAMatch>),
    /// No recognizer applies.
    Unclassified,
}

impl Theorem5Tag {
    pub fn name(&self) -> &'static str {
        match self {
            Theorem5Tag::SmallBase { .. } => "small_base",
            Theorem5Tag::ConstructionB(_) => "construction_b",
            Theorem5Tag::ConstructionA(_) => "construction_a",
            Theorem5Tag::Unclassified => "unclassified",
        }
    }
}

/// Classifies a reduced equitable 2-partition with second eigenvalue
/// `λ_2(n,q)`. Cases are tried in the order small base, lifted 8-cycles,
/// permutation switching.
pub fn classify_theorem5(p: &TwoPartition) -> Result<Theorem5Tag> {
    let params = p.params();
    let s = equitable_check(p)
        .quotient()
        .cloned()
        .ok_or_else(|| Error::Precondition("partition is not equitable".into()))?;
    if second_eigenvalue_index(&s, params)? != Some(2) {
        return Err(Error::Precondition(format!("quotient {s} does not have second eigenvalue λ2")));
    }
    let essential = essential_coordinates(p);
    if essential.len() != params.n() {
        return Err(Error::Precondition("partition is not reduced".into()));
    }
    if params.n() <= 3 {
        let secondary = recognize_a(p)?.map(Box::new);
        return Ok(Theorem5Tag::SmallBase { secondary });
    }
    if let Some(m) = recognize_b(p)? {
        return Ok(Theorem5Tag::ConstructionB(Box::new(m)));
    }
    if let Some(m) = recognize_a(p)? {
        return Ok(Theorem5Tag::ConstructionA(Box::new(m)));
    }
    Ok(Theorem5Tag::Unclassified)
}

/// Groups the symbols at coordinate `k` by the slice of `C` they cut out.
fn slice_classes(p: &TwoPartition, k: usize) -> Vec<SymbolSet> {
    let params = p.params();
    let mut classes: Vec<SymbolSet> = Vec::new();
    for a in 0..params.q() {
        let same = |b: usize| {
            (0..params.vertex_count())
                .filter(|&v| params.digit(v, k) == a)
                .all(|v| p.contains(v) == p.contains(params.with_digit(v, k, b)))
        };
        match classes.iter_mut().find(|c| same(*c.first().expect("nonempty"))) {
            Some(c) => {
                c.insert(a);
            }
            None => classes.push(SymbolSet::from([a])),
        }
    }
    classes
}

/// Lifted 8-cycles: `n = 4`, `q` even, and at every coordinate the symbols
/// fall into two slice classes of size `q/2`.
fn recognize_b(p: &TwoPartition) -> Result<Option<ConstructionBMatch>> {
    let params = p.params();
    let q = params.q();
    if params.n() != 4 || !q.is_multiple_of(2) {
        return Ok(None);
    }
    let mut low = Vec::with_capacity(4);
    for k in 0..4 {
        let classes = slice_classes(p, k);
        if classes.len() != 2 || classes[0].len() != q / 2 {
            return Ok(None);
        }
        // classes[0] contains symbol 0
        low.push(classes[0].clone());
    }
    let h42 = GraphParams::new(4, 2)?;
    let representative: Vec<[usize; 2]> = low
        .iter()
        .map(|c| [*c.first().unwrap(), *complement_set(q, c).first().unwrap()])
        .collect();
    let mut cell = Bitset::new(16);
    for x in 0..16 {
        let v: usize = (0..4).map(|k| representative[k][h42.digit(x, k)] * params.stride(k)).sum();
        if p.contains(v) {
            cell.insert(x);
        }
    }
    let Ok(pair) = TwoPartition::new(h42.clone(), cell) else {
        return Ok(None);
    };
    for part in [&pair, &pair.complement()] {
        if is_induced_cycle(&h42, &part.vertices()) != (CycleVerdict::Pass { length: 8 }) {
            return Ok(None);
        }
    }
    let split = low[0].clone();
    let high = complement_set(q, &split);
    let symbol_perms: Vec<Vec<usize>> = low
        .iter()
        .map(|lo| {
            let hi = complement_set(q, lo);
            let mut perm = vec![0; q];
            for (from, to) in split.iter().zip(lo) {
                perm[*from] = *to;
            }
            for (from, to) in high.iter().zip(&hi) {
                perm[*from] = *to;
            }
            perm
        })
        .collect();
    let g = Automorphism::new(params, (0..4).collect(), symbol_perms)?;
    let lifted = construct_b(q, &split, &pair)?;
    if lifted.apply_automorphism(&g)? != *p {
        return Ok(None);
    }
    Ok(Some(ConstructionBMatch { split, cycle_pair: pair, automorphism: g }))
}

/// Permutation switching: some pivot coordinate such that each slice
/// `x_pivot = a` depends on exactly one other coordinate `e(a)`, and every
/// other coordinate occurs as some `e(a)`.
fn recognize_a(p: &TwoPartition) -> Result<Option<ConstructionAMatch>> {
    let params = p.params();
    let (n, q) = (params.n(), params.q());
    if n < 2 {
        return Ok(None);
    }
    'pivot: for pivot in 0..n {
        let mut dependence = Vec::with_capacity(q);
        for a in 0..q {
            let ess: BTreeSet<usize> = essential_coordinates_of(params, |v| {
                p.contains(params.with_digit(v, pivot, a))
            });
            let ess: Vec<usize> = ess.into_iter().filter(|&k| k != pivot).collect();
            match ess.as_slice() {
                &[k] => dependence.push(k),
                _ => continue 'pivot,
            }
        }
        let others: Vec<usize> = (0..n).filter(|&k| k != pivot).collect();
        let mut blocks: BTreeMap<usize, SymbolSet> = BTreeMap::new();
        for (a, &k) in dependence.iter().enumerate() {
            blocks.entry(k).or_default().insert(a);
        }
        if blocks.len() != others.len() {
            continue;
        }
        let blocks = AlphabetBlocks::new(q, blocks.into_values().collect())?;
        let h2 = GraphParams::new(2, q)?;
        let base_cell = (0..q * q).filter(|&x| {
            let (a, s) = (x / q, x % q);
            p.contains(params.with_digit(params.with_digit(0, pivot, a), dependence[a], s))
        });
        let Ok(base) = TwoPartition::from_vertices(h2, base_cell) else {
            continue;
        };
        let Ok(switched) = construct_a(&blocks, &base) else {
            continue;
        };
        let mut coord_perm = vec![0; n];
        coord_perm[0] = pivot;
        for (j, &k) in others.iter().enumerate() {
            coord_perm[j + 1] = k;
        }
        let g = Automorphism::coordinate_permutation(params, coord_perm)?;
        if switched.apply_automorphism(&g)? == *p {
            return Ok(Some(ConstructionAMatch { blocks, base, automorphism: g }));
        }
    }
    Ok(None)
}
