//! The rule library: necessary conditions on partitions of `Lambda(X)`.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{block_a, block_b, LambdaSymbol, MdtError, MdtPartition};
use crate::profile::{alternating_2adic, excellent_pairs, pfister_exponent, v2, QuadricProfile};

/// Identifier of a rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum RuleId {
    /// Every block has even size.
    Parity,
    /// The pairs forced by the splitting pattern are co-blocked.
    Dual,
    /// The largest upper index of a block is fixed by its smallest lower index.
    Endpoint,
    /// Blocks starting inside one shell are shifts of a single base block.
    Shift,
    /// Structure of the block containing `0_lo`.
    Upper,
    /// 2-adic restrictions on the block containing `0_lo`.
    Karpenko,
    /// Excellent pairs are co-blocked.
    Exc,
    /// Connections of virtual Pfister neighbours.
    Vpn,
    /// Positions forced into a block by its size.
    Vishik,
}

/// How firmly a rule is established.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    Proven,
    Conjectural,
    InterpretationSensitive,
}

impl RuleId {
    pub const ALL: [RuleId; 9] = [
        RuleId::Parity,
        RuleId::Dual,
        RuleId::Endpoint,
        RuleId::Shift,
        RuleId::Upper,
        RuleId::Karpenko,
        RuleId::Exc,
        RuleId::Vpn,
        RuleId::Vishik,
    ];

    pub fn name(self) -> &'static str {
        match self {
            RuleId::Parity => "R-PARITY",
            RuleId::Dual => "R-DUAL",
            RuleId::Endpoint => "R-ENDPOINT",
            RuleId::Shift => "R-SHIFT",
            RuleId::Upper => "R-UPPER",
            RuleId::Karpenko => "R-KARPENKO",
            RuleId::Exc => "R-EXC",
            RuleId::Vpn => "R-VPN",
            RuleId::Vishik => "R-VISHIK",
        }
    }

    /// Provenance of the rule for a profile with quasilinear dimension `s`.
    pub fn provenance(self, s: usize) -> Provenance {
        match self {
            RuleId::Exc if s >= 2 => Provenance::Conjectural,
            RuleId::Vishik => Provenance::InterpretationSensitive,
            _ => Provenance::Proven,
        }
    }
}

impl fmt::Display for RuleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for RuleId {
    type Err = MdtError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let key = s.trim().to_ascii_uppercase();
        let key = key.strip_prefix("R-").unwrap_or(&key);
        RuleId::ALL
            .into_iter()
            .find(|r| &r.name()[2..] == key)
            .ok_or_else(|| MdtError::UnknownRule(s.trim().to_string()))
    }
}

/// Which formula R-ENDPOINT uses for `b(Lambda)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum EndpointVariant {
    /// `b = a + d_X + 1 - j_{t-1} - j_t`.
    #[default]
    Consistent,
    /// `b = d_X - (a + i_t - 1)`.
    Printed,
}

/// A selection of rules.
///
/// R-EXC and R-VISHIK are only applied where they are established (`s <= 1`)
/// unless `conjectural` is set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RuleSet {
    pub enabled: BTreeSet<RuleId>,
    pub conjectural: bool,
    pub endpoint: EndpointVariant,
}

impl Default for RuleSet {
    fn default() -> Self {
        RuleSet::proven()
    }
}

impl RuleSet {
    /// Every rule except R-VISHIK, applied only where proven.
    pub fn proven() -> Self {
        RuleSet {
            enabled: RuleId::ALL.into_iter().filter(|r| *r != RuleId::Vishik).collect(),
            conjectural: false,
            endpoint: EndpointVariant::Consistent,
        }
    }

    /// The proven rules, with R-EXC extended to `s >= 2`.
    pub fn conjectural() -> Self {
        RuleSet {
            conjectural: true,
            ..RuleSet::proven()
        }
    }

    /// Every rule, including the conjectural extensions.
    pub fn all() -> Self {
        RuleSet {
            enabled: RuleId::ALL.into_iter().collect(),
            conjectural: true,
            endpoint: EndpointVariant::Consistent,
        }
    }

    /// No rules at all.
    pub fn empty() -> Self {
        RuleSet {
            enabled: BTreeSet::new(),
            conjectural: false,
            endpoint: EndpointVariant::Consistent,
        }
    }

    pub fn from_rules<I: IntoIterator<Item = RuleId>>(rules: I) -> Self {
        RuleSet {
            enabled: rules.into_iter().collect(),
            ..RuleSet::empty()
        }
    }

    /// Parses a comma-separated list. Tokens are `proven`, `conjectural`,
    /// `all`, rule names with or without the `R-` prefix, and
    /// `R-ENDPOINT-PRINTED`. Sets named by tokens are unioned.
    pub fn parse(list: &str) -> Result<Self, MdtError> {
        let mut out = RuleSet::empty();
        for token in list.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            match token.to_ascii_lowercase().as_str() {
                "proven" => out.enabled.extend(RuleSet::proven().enabled),
                "conjectural" => {
                    out.enabled.extend(RuleSet::proven().enabled);
                    out.conjectural = true;
                }
                "all" => {
                    out.enabled.extend(RuleId::ALL);
                    out.conjectural = true;
                }
                "r-endpoint-printed" | "endpoint-printed" => {
                    out.enabled.insert(RuleId::Endpoint);
                    out.endpoint = EndpointVariant::Printed;
                }
                _ => {
                    out.enabled.insert(token.parse()?);
                }
            }
        }
        Ok(out)
    }

    pub fn contains(&self, rule: RuleId) -> bool {
        self.enabled.contains(&rule)
    }

    pub fn with(mut self, rule: RuleId) -> Self {
        self.enabled.insert(rule);
        self
    }

    pub fn without(mut self, rule: RuleId) -> Self {
        self.enabled.remove(&rule);
        self
    }

    /// Whether a rule applies to profiles with quasilinear dimension `s`.
    pub fn applies(&self, rule: RuleId, s: usize) -> bool {
        if !self.contains(rule) {
            return false;
        }
        match rule {
            RuleId::Exc | RuleId::Vishik => s <= 1 || self.conjectural,
            _ => true,
        }
    }
}

/// A failed rule with a human-readable witness.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Violation {
    pub rule: String,
    pub witness: String,
}

impl Violation {
    fn new(rule: RuleId, witness: String) -> Self {
        Violation {
            rule: rule.name().to_string(),
            witness,
        }
    }
}

/// Pairs `(j_{t-1} + i)_lo ~ (d_X - (j_t - 1 - i))^up` for every shell `t`
/// and `0 <= i < i_t`.
pub fn forced_connections(profile: &QuadricProfile) -> Vec<(LambdaSymbol, LambdaSymbol)> {
    dual_pairs(profile)
}

/// Same as [`forced_connections`].
pub fn dual_pairs(profile: &QuadricProfile) -> Vec<(LambdaSymbol, LambdaSymbol)> {
    let d = profile.quadric_dim();
    let mut out = Vec::new();
    for t in 1..=profile.height() {
        let (lo, hi) = (profile.j(t - 1), profile.j(t));
        for i in 0..hi - lo {
            out.push((LambdaSymbol::lo(lo + i), LambdaSymbol::up(d - (hi - 1 - i))));
        }
    }
    out
}

/// Excellent pairs at level 0 and at every kernel level, shifted back into
/// `Lambda(X)`. Levels are included when `s <= 1` or `conjectural` is set.
pub fn exc_pairs(profile: &QuadricProfile, conjectural: bool) -> Vec<(LambdaSymbol, LambdaSymbol)> {
    if profile.s() > 1 && !conjectural {
        return Vec::new();
    }
    let mut out = BTreeSet::new();
    for t in 0..profile.height() {
        let kernel = profile.kernel(t).expect("t < h");
        let w = profile.j(t);
        for p in excellent_pairs(&kernel) {
            out.insert((LambdaSymbol::lo(p.a + w), LambdaSymbol::up(p.b + w)));
        }
    }
    out.into_iter().collect()
}

/// Connections from the virtual Pfister neighbour lemma, applied at every
/// level whose kernel satisfies one of the sufficient conditions: maximal
/// splitting, `m = 1`, or `m = 2` with 2 in the pattern.
pub fn vpn_pairs(profile: &QuadricProfile) -> Vec<(LambdaSymbol, LambdaSymbol)> {
    let d = profile.quadric_dim();
    let r = profile.r();
    let mut out = BTreeSet::new();
    for t in 0..profile.height() {
        let k = profile.kernel(t).expect("t < h");
        let w = profile.j(t);
        let n = pfister_exponent(k.dim());
        let two_n = 1usize << n;
        let m = k.dim() - two_n;
        let gated = k.i(1) == m || m == 1 || (m == 2 && k.pattern().contains(&2));
        if !gated {
            continue;
        }
        for i in 0..m {
            let lo = LambdaSymbol::lo(i + w);
            let up = LambdaSymbol::up(two_n + i - 1 + w);
            if lo.in_window(d, r) && up.in_window(d, r) {
                out.insert((lo, up));
            }
        }
        for tt in 1..=k.height() {
            if k.j(tt) == m && tt >= 2 {
                out.insert((LambdaSymbol::lo(w), LambdaSymbol::lo(k.j(tt - 1) + w)));
            }
        }
    }
    out.into_iter().collect()
}

fn fmt_block(block: &[LambdaSymbol]) -> String {
    let inner: Vec<String> = block.iter().map(|s| s.to_string()).collect();
    format!("{{{}}}", inner.join(","))
}

/// Checks a partition against a rule set and lists every violation.
///
/// Fails when the partition does not partition `Lambda(X)`.
pub fn check_partition(
    profile: &QuadricProfile,
    partition: &MdtPartition,
    rules: &RuleSet,
) -> Result<Vec<Violation>, MdtError> {
    partition.validate(profile)?;
    let mut out = Vec::new();
    let s = profile.s();
    if rules.applies(RuleId::Parity, s) {
        check_parity(partition, &mut out);
    }
    if rules.applies(RuleId::Dual, s) {
        check_pairs(RuleId::Dual, &dual_pairs(profile), partition, &mut out);
    }
    if rules.applies(RuleId::Endpoint, s) {
        check_endpoint(profile, partition, rules.endpoint, &mut out);
    }
    if rules.applies(RuleId::Shift, s) {
        check_shift(profile, partition, &mut out);
    }
    if rules.applies(RuleId::Upper, s) {
        check_upper(profile, partition, &mut out);
    }
    if rules.applies(RuleId::Karpenko, s) {
        check_karpenko(profile, partition, &mut out);
    }
    if rules.applies(RuleId::Exc, s) {
        check_pairs(RuleId::Exc, &exc_pairs(profile, rules.conjectural), partition, &mut out);
    }
    if rules.applies(RuleId::Vpn, s) {
        check_pairs(RuleId::Vpn, &vpn_pairs(profile), partition, &mut out);
    }
    if rules.applies(RuleId::Vishik, s) {
        check_vishik(profile, partition, &mut out);
    }
    Ok(out)
}

fn check_parity(partition: &MdtPartition, out: &mut Vec<Violation>) {
    for b in partition.blocks() {
        if b.len() % 2 == 1 {
            out.push(Violation::new(
                RuleId::Parity,
                format!("block {} has odd size {}", fmt_block(b), b.len()),
            ));
        }
    }
}

fn check_pairs(
    rule: RuleId,
    pairs: &[(LambdaSymbol, LambdaSymbol)],
    partition: &MdtPartition,
    out: &mut Vec<Violation>,
) {
    let index = partition.block_index();
    for (x, y) in pairs {
        if index.get(x) != index.get(y) {
            out.push(Violation::new(rule, format!("{x} and {y} are in different blocks")));
        }
    }
}

/// The value of `b(Lambda)` required by R-ENDPOINT for a block with `a(Lambda) = a`.
pub(crate) fn expected_b(profile: &QuadricProfile, a: usize, variant: EndpointVariant) -> Option<usize> {
    let t = profile.shell_of(a)?;
    let d = profile.quadric_dim() as i64;
    let (lo, hi) = (profile.j(t - 1) as i64, profile.j(t) as i64);
    let a = a as i64;
    let b = match variant {
        EndpointVariant::Consistent => a + d + 1 - lo - hi,
        EndpointVariant::Printed => d - (a + (hi - lo) - 1),
    };
    (b >= 0).then_some(b as usize)
}

fn check_endpoint(
    profile: &QuadricProfile,
    partition: &MdtPartition,
    variant: EndpointVariant,
    out: &mut Vec<Violation>,
) {
    for block in partition.blocks() {
        let Some(a) = block_a(block) else { continue };
        let want = expected_b(profile, a, variant);
        let have = block_b(block);
        if want != have {
            let want = want.map_or("none".to_string(), |b| b.to_string());
            let have = have.map_or("none".to_string(), |b| b.to_string());
            out.push(Violation::new(
                RuleId::Endpoint,
                format!(
                    "block {} has a = {a}, b = {have}, expected b = {want}",
                    fmt_block(block)
                ),
            ));
        }
    }
}

fn check_shift(profile: &QuadricProfile, partition: &MdtPartition, out: &mut Vec<Violation>) {
    let blocks = partition.blocks();
    let d = profile.quadric_dim();
    let r = profile.r();
    for t in 1..=profile.height() {
        let (lo, hi) = (profile.j(t - 1), profile.j(t));
        let in_shell: Vec<&Vec<LambdaSymbol>> = blocks
            .iter()
            .filter(|b| block_a(b).is_some_and(|a| lo <= a && a < hi))
            .collect();
        if in_shell.is_empty() {
            continue;
        }
        let Some(base) = in_shell.iter().find(|b| block_a(b) == Some(lo)) else {
            out.push(Violation::new(
                RuleId::Shift,
                format!("blocks start in shell {t} but none has a = {lo}"),
            ));
            continue;
        };
        for k in 1..hi - lo {
            let mut shifted: Vec<LambdaSymbol> = base.iter().map(|s| s.shifted(k)).collect();
            shifted.sort();
            let ok = shifted.iter().all(|s| s.in_window(d, r)) && blocks.contains(&shifted);
            if !ok {
                out.push(Violation::new(
                    RuleId::Shift,
                    format!("shift [{k}] of {} is not a block", fmt_block(base)),
                ));
            }
        }
        for sym in base.iter().filter(|s| s.is_lo()) {
            let tp = profile.shell_of(sym.index).expect("lower index below r");
            if sym.index + (hi - lo) > profile.j(tp) {
                out.push(Violation::new(
                    RuleId::Shift,
                    format!(
                        "{sym} in base block of shell {t}, but {} + {} > j_{tp} = {}",
                        sym.index,
                        hi - lo,
                        profile.j(tp)
                    ),
                ));
            }
        }
    }
}

fn check_upper(profile: &QuadricProfile, partition: &MdtPartition, out: &mut Vec<Violation>) {
    let Some(u) = partition.upper_block() else { return };
    let d = profile.quadric_dim();
    let h = profile.height();
    let want = d + 1 - profile.j(1);
    if block_b(u) != Some(want) {
        out.push(Violation::new(
            RuleId::Upper,
            format!("upper block {} must have b = {want}", fmt_block(u)),
        ));
    }
    let los: Vec<usize> = u.iter().filter(|s| s.is_lo()).map(|s| s.index).collect();
    if u.len() != 2 {
        if los.len() < 2 {
            out.push(Violation::new(
                RuleId::Upper,
                format!(
                    "upper block {} has size other than 2 but fewer than 2 lower symbols",
                    fmt_block(u)
                ),
            ));
        } else {
            let min_pos = los
                .iter()
                .copied()
                .filter(|&i| i > 0)
                .min()
                .expect("two distinct lower symbols");
            if !(1..h).any(|t| profile.j(t) == min_pos) {
                out.push(Violation::new(
                    RuleId::Upper,
                    format!("smallest positive lower index {min_pos} of the upper block is not some j_t with t < h"),
                ));
            }
        }
    }
    if h >= 2 {
        let (j1, j2) = (profile.j(1), profile.j(2));
        let i1 = profile.i(1);
        let i2 = profile.i(2);
        let mid: BTreeSet<usize> = los.iter().copied().filter(|&i| j1 <= i && i < j2).collect();
        if !mid.is_empty() {
            if !i2.is_multiple_of(i1) {
                out.push(Violation::new(
                    RuleId::Upper,
                    format!("upper block meets shell 2 but i_1 = {i1} does not divide i_2 = {i2}"),
                ));
            } else {
                let want: BTreeSet<usize> = (1..).map(|k| k * i1).take_while(|&x| x + i1 <= j2).collect();
                if mid != want {
                    out.push(Violation::new(
                        RuleId::Upper,
                        format!("upper block meets shell 2 in {mid:?}, expected {want:?}"),
                    ));
                }
            }
        }
    }
}

fn check_karpenko(profile: &QuadricProfile, partition: &MdtPartition, out: &mut Vec<Violation>) {
    let Some(u) = partition.upper_block() else { return };
    if u.len() <= 2 {
        return;
    }
    let i1 = profile.i(1);
    let v = i1.next_power_of_two().trailing_zeros();
    let pos: Vec<usize> = u.iter().filter(|s| s.is_lo() && s.index > 0).map(|s| s.index).collect();
    for &i in &pos {
        if i % (1usize << v) != 0 {
            out.push(Violation::new(
                RuleId::Karpenko,
                format!("{i}_lo is in the upper block but not divisible by 2^{v}"),
            ));
        }
    }
    let Some(&min_pos) = pos.iter().min() else { return };
    let Some(t) = (1..profile.height()).find(|&t| profile.j(t) == min_pos) else {
        return;
    };
    let next = profile.i(t + 1);
    let vi1 = v2(i1);
    if v2(next) < vi1 {
        out.push(Violation::new(
            RuleId::Karpenko,
            format!(
                "upper block starts again at j_{t} = {min_pos}, but v2(i_{}) = {} < v2(i_1) = {vi1}",
                t + 1,
                v2(next)
            ),
        ));
    }
    if min_pos > i1 && v2(min_pos - i1) >= vi1 + 2 && v2(next) > vi1 + 1 {
        out.push(Violation::new(
            RuleId::Karpenko,
            format!(
                "v2(j_{t} - i_1) = {} >= v2(i_1) + 2 forces v2(i_{}) <= {}, found {}",
                v2(min_pos - i1),
                t + 1,
                vi1 + 1,
                v2(next)
            ),
        ));
    }
}

/// Relative positions `p_k` for a block of size parameter `m`: writing
/// `m = 2^{n_1} - ... + (-1)^{j-1} 2^{n_j}`, `2 p_k = m + sum_{i >= k} (-1)^{k+i-1} 2^{n_i}`.
pub(crate) fn vishik_offsets(m: usize) -> Vec<usize> {
    let exp = alternating_2adic(m);
    let j = exp.n.len();
    (0..j)
        .filter_map(|k| {
            let mut twice = m as i64;
            for (i, &e) in exp.n.iter().enumerate().skip(k) {
                let sign = if (i - k) % 2 == 0 { -1 } else { 1 };
                twice += sign * (1i64 << e);
            }
            (twice >= 0 && twice % 2 == 0).then_some((twice / 2) as usize)
        })
        .collect()
}

fn check_vishik(profile: &QuadricProfile, partition: &MdtPartition, out: &mut Vec<Violation>) {
    let r = profile.r();
    for t in 1..profile.height() {
        let (lo, hi) = (profile.j(t - 1), profile.j(t));
        let Some(block) = partition.blocks().iter().find(|b| block_a(b) == Some(lo)) else {
            continue;
        };
        let m = profile.dim() - 2 * lo - hi;
        for p in vishik_offsets(m) {
            let pos = lo + p;
            if pos >= r {
                continue;
            }
            if !block.contains(&LambdaSymbol::lo(pos)) {
                out.push(Violation::new(
                    RuleId::Vishik,
                    format!(
                        "{pos}_lo must lie in the block {} starting at j_{} = {lo}",
                        fmt_block(block),
                        t - 1
                    ),
                ));
            }
            let tp = profile.shell_of(pos).expect("pos below r");
            if tp >= t && pos + (hi - lo) > profile.j(tp) {
                out.push(Violation::new(
                    RuleId::Vishik,
                    format!("{pos} + i_{t} exceeds j_{tp} = {}", profile.j(tp)),
                ));
            }
        }
    }
}
