//! Exhaustive search for partitions of `Lambda(X)` satisfying a rule set.
//!
//! Symbols that some enabled pair rule forces together are merged first with a
//! union-find. The resulting classes are then distributed into blocks in
//! restricted-growth order, so every set partition of the classes is visited
//! exactly once. Classes are ordered by their smallest lower index, which fixes
//! `a(Lambda)` as soon as a block is opened and lets R-ENDPOINT prune upper
//! symbols that overshoot. Complete candidates go through [`check_partition`].

use std::collections::BTreeMap;

use super::rules::expected_b;
use super::{check_partition, dual_pairs, exc_pairs, lambda_set, vpn_pairs, LambdaSymbol, MdtError, MdtPartition};
use super::{RuleId, RuleSet};
use crate::profile::QuadricProfile;

/// Default bound on `r` for [`enumerate_mdt`].
pub const DEFAULT_MAX_R: usize = 8;

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, x: usize) -> usize {
        let p = self.parent[x];
        if p == x {
            return x;
        }
        let root = self.find(p);
        self.parent[x] = root;
        root
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// Classes of symbols that the enabled pair rules force into one block,
/// sorted with classes containing lower symbols first by smallest lower index.
pub fn forced_classes(profile: &QuadricProfile, rules: &RuleSet) -> Vec<Vec<LambdaSymbol>> {
    let symbols = lambda_set(profile);
    let pos: BTreeMap<LambdaSymbol, usize> = symbols.iter().enumerate().map(|(k, s)| (*s, k)).collect();
    let mut uf = UnionFind::new(symbols.len());
    let s = profile.s();
    let mut pairs = Vec::new();
    if rules.applies(RuleId::Dual, s) {
        pairs.extend(dual_pairs(profile));
    }
    if rules.applies(RuleId::Vpn, s) {
        pairs.extend(vpn_pairs(profile));
    }
    if rules.applies(RuleId::Exc, s) {
        pairs.extend(exc_pairs(profile, rules.conjectural));
    }
    for (x, y) in pairs {
        uf.union(pos[&x], pos[&y]);
    }
    let mut groups: BTreeMap<usize, Vec<LambdaSymbol>> = BTreeMap::new();
    for (k, s) in symbols.iter().enumerate() {
        groups.entry(uf.find(k)).or_default().push(*s);
    }
    let mut classes: Vec<Vec<LambdaSymbol>> = groups.into_values().collect();
    // Lower symbols sort first, so the first element decides the order.
    classes.sort();
    classes
}

/// All partitions of `Lambda(X)` with no violation under `rules`, in
/// canonical order.
///
/// Fails with `BoundExceeded` when `r > max_r`. Without R-DUAL the search
/// space is the full set of partitions of `2r` symbols, so keep `r` small in
/// that case.
pub fn enumerate_mdt(profile: &QuadricProfile, rules: &RuleSet, max_r: usize) -> Result<Vec<MdtPartition>, MdtError> {
    if profile.r() > max_r {
        return Err(MdtError::BoundExceeded { r: profile.r(), max_r });
    }
    let classes = forced_classes(profile, rules);
    let prune_endpoint = rules.applies(RuleId::Endpoint, profile.s());
    let mut search = Search {
        profile,
        rules,
        classes: &classes,
        prune_endpoint,
        blocks: Vec::new(),
        out: Vec::new(),
    };
    search.run(0)?;
    let mut out = search.out;
    out.sort();
    out.dedup();
    Ok(out)
}

struct OpenBlock {
    symbols: Vec<LambdaSymbol>,
    max_b: Option<usize>,
}

struct Search<'a> {
    profile: &'a QuadricProfile,
    rules: &'a RuleSet,
    classes: &'a [Vec<LambdaSymbol>],
    prune_endpoint: bool,
    blocks: Vec<OpenBlock>,
    out: Vec<MdtPartition>,
}

impl Search<'_> {
    fn fits(&self, block: &OpenBlock, class: &[LambdaSymbol]) -> bool {
        match block.max_b {
            Some(b) => class.iter().all(|s| s.is_lo() || s.index <= b),
            None => true,
        }
    }

    fn run(&mut self, k: usize) -> Result<(), MdtError> {
        if k == self.classes.len() {
            let partition = MdtPartition::new(self.blocks.iter().map(|b| b.symbols.clone()).collect());
            if check_partition(self.profile, &partition, self.rules)?.is_empty() {
                self.out.push(partition);
            }
            return Ok(());
        }
        let class = &self.classes[k];
        for idx in 0..self.blocks.len() {
            if self.prune_endpoint && !self.fits(&self.blocks[idx], class) {
                continue;
            }
            let before = self.blocks[idx].symbols.len();
            self.blocks[idx].symbols.extend_from_slice(class);
            self.run(k + 1)?;
            self.blocks[idx].symbols.truncate(before);
        }
        let a = class.iter().filter(|s| s.is_lo()).map(|s| s.index).min();
        let max_b = match (self.prune_endpoint, a) {
            (true, Some(a)) => expected_b(self.profile, a, self.rules.endpoint),
            _ => None,
        };
        let block = OpenBlock {
            symbols: class.clone(),
            max_b,
        };
        if !self.prune_endpoint || self.fits(&block, class) {
            self.blocks.push(block);
            self.run(k + 1)?;
            self.blocks.pop();
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classes_follow_dual_pairs() {
        let p = QuadricProfile::new(6, 2, 2, vec![0, 2]).unwrap();
        let c = forced_classes(&p, &RuleSet::proven());
        assert_eq!(
            c,
            vec![
                vec![LambdaSymbol::lo(0), LambdaSymbol::up(3)],
                vec![LambdaSymbol::lo(1), LambdaSymbol::up(4)]
            ]
        );
        let c = forced_classes(&p, &RuleSet::empty());
        assert_eq!(c.len(), 4);
    }

    #[test]
    fn height_one_is_unique() {
        let p = QuadricProfile::new(6, 2, 2, vec![0, 2]).unwrap();
        let all = enumerate_mdt(&p, &RuleSet::proven(), DEFAULT_MAX_R).unwrap();
        assert_eq!(all.len(), 1);
        assert_eq!(all[0].to_string(), "{{0_lo,3^up}, {1_lo,4^up}}");
    }

    #[test]
    fn bound_is_enforced() {
        let p = QuadricProfile::new(18, 9, 0, vec![0, 1, 2, 3, 4, 5, 6, 7, 8, 9]);
        if let Ok(p) = p {
            assert!(matches!(
                enumerate_mdt(&p, &RuleSet::proven(), DEFAULT_MAX_R),
                Err(MdtError::BoundExceeded { .. })
            ));
        }
        let p = QuadricProfile::new(8, 4, 0, vec![0, 4]).unwrap();
        assert!(matches!(
            enumerate_mdt(&p, &RuleSet::proven(), 3),
            Err(MdtError::BoundExceeded { r: 4, max_r: 3 })
        ));
    }
}
