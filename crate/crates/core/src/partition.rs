//! Random partitions of the coordinates and the binary search that isolates a block
//! carrying a change in value.

use std::collections::BTreeMap;

use rand::{Rng, RngCore};
use thiserror::Error;

use crate::boolfn::{mask_indices, Mask, Point};

/// Coordinates split into `r` blocks, some of which may be empty.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Partition {
    n: usize,
    r: usize,
    coords: Mask,
    /// Block of each coordinate in `coords`; `u32::MAX` elsewhere.
    assign: Vec<u32>,
    /// Non-empty blocks only, since `r` can far exceed `n`.
    blocks: BTreeMap<usize, Mask>,
}

impl Partition {
    /// Each coordinate of `coords` goes to one of `r` blocks, independently and uniformly.
    pub fn random_of(n: usize, coords: Mask, r: usize, rng: &mut dyn RngCore) -> Self {
        assert!(r >= 1, "a partition needs at least one block");
        let mut assign = vec![u32::MAX; n];
        let mut blocks: BTreeMap<usize, Mask> = BTreeMap::new();
        for i in mask_indices(coords) {
            let b = rng.gen_range(0..r);
            assign[i] = b as u32;
            *blocks.entry(b).or_default() |= 1 << i;
        }
        Partition { n, r, coords, assign, blocks }
    }

    /// Build from explicit blocks, e.g. to force one relevant variable per block in tests.
    pub fn from_blocks(n: usize, r: usize, blocks: &[Mask]) -> Self {
        assert!(blocks.len() <= r);
        let mut assign = vec![u32::MAX; n];
        let mut map = BTreeMap::new();
        let mut coords = 0;
        for (b, &m) in blocks.iter().enumerate() {
            assert_eq!(coords & m, 0, "blocks overlap");
            coords |= m;
            for i in mask_indices(m) {
                assign[i] = b as u32;
            }
            if m != 0 {
                map.insert(b, m);
            }
        }
        Partition { n, r, coords, assign, blocks: map }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn r(&self) -> usize {
        self.r
    }

    /// Union of all blocks.
    pub fn coords(&self) -> Mask {
        self.coords
    }

    pub fn block(&self, b: usize) -> Mask {
        self.blocks.get(&b).copied().unwrap_or(0)
    }

    pub fn block_of(&self, i: usize) -> Option<usize> {
        match self.assign.get(i) {
            Some(&b) if b != u32::MAX => Some(b as usize),
            _ => None,
        }
    }

    /// Non-empty blocks in ascending index order.
    pub fn nonempty(&self) -> impl Iterator<Item = (usize, Mask)> + '_ {
        self.blocks.iter().map(|(&b, &m)| (b, m))
    }

    /// Blocks meeting `m`, ascending.
    pub fn blocks_meeting(&self, m: Mask) -> Vec<usize> {
        let mut out: Vec<usize> = mask_indices(m & self.coords)
            .filter_map(|i| self.block_of(i))
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }
}

/// `x_X o w`: agrees with `u` on `mask` and with `background` elsewhere.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Restriction {
    pub mask: Mask,
    pub background: Point,
}

impl Restriction {
    pub fn compose(&self, u: Point) -> Point {
        assert_eq!(u.n(), self.background.n());
        u.splice(self.mask, self.background)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SearchError {
    #[error("endpoints have equal values")]
    EqualEndpoints,
    #[error("endpoints differ inside the excluded set")]
    DifferInsideExcluded,
    #[error("endpoints differ only outside the partition")]
    NoCandidates,
}

/// Outcome of [`binary_search_block`]: `a` and `b` differ only inside `block` and
/// `fa != fb`. `a` descends from the first endpoint, `b` from the second.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchResult {
    pub block: usize,
    pub a: Point,
    pub b: Point,
    pub fa: bool,
    pub fb: bool,
    pub queries: u32,
}

/// Find a block outside `excluded` that carries the change between `u` and `w`.
///
/// The caller supplies `f(u)` and `f(w)`. Each round moves `u`'s values onto the lower
/// half of the remaining candidate blocks and keeps whichever half still shows a change,
/// so at most `ceil(log2 #candidates)` queries are made. Every point queried agrees with
/// `u` wherever `u` and `w` agree.
pub fn binary_search_block(
    mq: &mut dyn FnMut(Point) -> bool,
    part: &Partition,
    excluded: Mask,
    u: Point,
    fu: bool,
    w: Point,
    fw: bool,
) -> Result<SearchResult, SearchError> {
    if fu == fw {
        return Err(SearchError::EqualEndpoints);
    }
    let diff = u.bits() ^ w.bits();
    if diff & excluded != 0 {
        return Err(SearchError::DifferInsideExcluded);
    }
    let mut cands = part.blocks_meeting(diff);
    if cands.is_empty() {
        return Err(SearchError::NoCandidates);
    }
    let (mut a, mut fa, mut b, mut fb) = (u, fu, w, fw);
    let mut queries = 0;
    while cands.len() > 1 {
        let half = (cands.len() + 1) / 2;
        let left: Mask = cands[..half].iter().fold(0, |m, &c| m | part.block(c));
        let c = a.splice(left, b);
        let fc = mq(c);
        queries += 1;
        if fc != fb {
            a = c;
            fa = fc;
            cands.truncate(half);
        } else {
            b = c;
            fb = fc;
            cands.drain(..half);
        }
    }
    Ok(SearchResult { block: cands[0], a, b, fa, fb, queries })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boolfn::FunctionSpec;

    #[test]
    fn single_relevant_variable_forces_its_block() {
        let f = FunctionSpec::linear(4, 0b0100).unwrap();
        let part = Partition::from_blocks(4, 2, &[0b0011, 0b1100]);
        let u: Point = "1010".parse().unwrap();
        let w = Point::zeros(4);
        let res = binary_search_block(&mut |x| f.evaluate(x), &part, 0, u, true, w, false).unwrap();
        assert_eq!(res.block, 1);
        assert_eq!(res.queries, 1);
        assert_ne!(f.evaluate(res.a), f.evaluate(res.b));
    }

    #[test]
    fn equal_endpoints_is_a_contract_error() {
        let part = Partition::from_blocks(2, 1, &[0b11]);
        let p = Point::zeros(2);
        let r = binary_search_block(&mut |_| false, &part, 0, p, false, p.flip(0), false);
        assert_eq!(r, Err(SearchError::EqualEndpoints));
    }

    #[test]
    fn compose_identities() {
        let u: Point = "111".parse().unwrap();
        let w = Point::zeros(3);
        assert_eq!(Restriction { mask: 0b111, background: w }.compose(u), u);
        assert_eq!(Restriction { mask: 0, background: w }.compose(u), w);
        assert_eq!(Restriction { mask: 0b101, background: w }.compose(u).to_string(), "101");
    }
}
