//! Closed-form partitions for the families where the answer is known.

use super::{lambda_set_for, LambdaSymbol, MdtError, MdtPartition};
use crate::profile::{pfister_neighbour_invariants, strongly_excellent_profile, ProfileError, QuadricProfile};

fn binary(lo: usize, up: usize) -> Vec<LambdaSymbol> {
    vec![LambdaSymbol::lo(lo), LambdaSymbol::up(up)]
}

/// Height 1: the blocks `{i_lo, (r+s-1+i)^up}` for `0 <= i < r`.
pub fn mdt_height_one(profile: &QuadricProfile) -> Result<MdtPartition, MdtError> {
    if profile.height() != 1 {
        return Err(MdtError::NotHeightOne { h: profile.height() });
    }
    let (r, s) = (profile.r(), profile.s());
    Ok(MdtPartition::new((0..r).map(|i| binary(i, r + s - 1 + i)).collect()))
}

/// Pfister neighbour of dimension `2^n + m`: the blocks
/// `{i_lo, (2^n - 1 + i)^up}` for `i < m`, plus `inner` shifted by `m`.
///
/// `inner` must be `None` when `r = m` and a partition of the symbol set of
/// the complementary type `(r - m, s)` when `r > m`.
pub fn mdt_pfister_neighbour(profile: &QuadricProfile, inner: Option<&MdtPartition>) -> Result<MdtPartition, MdtError> {
    let inv = pfister_neighbour_invariants(profile.dim(), profile.s())?;
    let (r, m) = (profile.r(), inv.m);
    if r < m || profile.i(1) != m {
        return Err(ProfileError::ConstraintViolated(format!(
            "a Pfister neighbour of dimension {} has first higher index m = {m}, found {}",
            profile.dim(),
            profile.i(1)
        ))
        .into());
    }
    let two_n = 1usize << inv.n;
    let mut blocks: Vec<Vec<LambdaSymbol>> = (0..m).map(|i| binary(i, two_n - 1 + i)).collect();
    match inner {
        None if r == m => {}
        Some(p) if r == m && p.blocks().is_empty() => {}
        None => {
            return Err(MdtError::ArityMismatch(format!(
                "r = {r} exceeds m = {m}, so a partition for type ({}, {}) is required",
                r - m,
                profile.s()
            )))
        }
        Some(p) => {
            if r == m {
                return Err(MdtError::ArityMismatch(
                    "r = m leaves no room for an inner partition".into(),
                ));
            }
            let (rc, dc) = (r - m, profile.quadric_dim() - 2 * m);
            p.validate_for(dc, rc).map_err(|e| {
                MdtError::ArityMismatch(format!(
                    "inner partition does not match type ({rc}, {}): {e}",
                    profile.s()
                ))
            })?;
            blocks.extend(p.shifted(m).blocks().iter().cloned());
        }
    }
    let out = MdtPartition::new(blocks);
    out.validate(profile)?;
    Ok(out)
}

/// Strongly excellent data `n_1 > ... > n_h` with quasilinear dimension `s`:
/// the profile and the blocks `{0_lo, (2^{n_{i+1}-1} - 1)^up}[m_1 + ... + m_i + j]`.
pub fn mdt_strongly_excellent(n_list: &[u32], s: usize) -> Result<(QuadricProfile, MdtPartition), MdtError> {
    let (profile, _) = strongly_excellent_profile(n_list, s)?;
    let mut blocks = Vec::with_capacity(profile.r());
    for (i, &n) in n_list.iter().enumerate() {
        let start = profile.j(i);
        let gap = (1usize << (n - 1)) - 1;
        for j in 0..profile.i(i + 1) {
            blocks.push(binary(start + j, gap + start + j));
        }
    }
    let out = MdtPartition::new(blocks);
    out.validate(&profile).map_err(|e| {
        MdtError::Profile(ProfileError::ConstraintViolated(format!(
            "strongly excellent blocks do not cover Lambda(X): {e}"
        )))
    })?;
    Ok((profile, out))
}

/// Partition for an isotropic form of Witt index `w` whose anisotropic part
/// has the given profile and partition: `w` lower singletons, `w` upper
/// singletons, and `inner` shifted by `w`. The symbol window grows to
/// `d_X + 2w` and `r + w`.
pub fn mdt_isotropic_lift(
    w: usize,
    inner: &MdtPartition,
    inner_profile: &QuadricProfile,
) -> Result<MdtPartition, MdtError> {
    if w == 0 {
        return Err(MdtError::InvalidLift);
    }
    inner.validate(inner_profile)?;
    let d = inner_profile.quadric_dim() + 2 * w;
    let r = inner_profile.r() + w;
    let mut blocks: Vec<Vec<LambdaSymbol>> = (0..w).map(|i| vec![LambdaSymbol::lo(i)]).collect();
    blocks.extend((0..w).map(|i| vec![LambdaSymbol::up(d - i)]));
    blocks.extend(inner.shifted(w).blocks().iter().cloned());
    let out = MdtPartition::new(blocks);
    debug_assert_eq!(out.symbols(), lambda_set_for(d, r));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn height_one_examples() {
        let p = QuadricProfile::new(6, 2, 2, vec![0, 2]).unwrap();
        assert_eq!(mdt_height_one(&p).unwrap().to_string(), "{{0_lo,3^up}, {1_lo,4^up}}");
        let q = QuadricProfile::new(7, 1, 5, vec![0, 1]).unwrap();
        assert_eq!(mdt_height_one(&q).unwrap().to_string(), "{{0_lo,5^up}}");
        let t = QuadricProfile::new(7, 2, 3, vec![0, 1, 2]).unwrap();
        assert!(matches!(mdt_height_one(&t), Err(MdtError::NotHeightOne { h: 2 })));
    }

    #[test]
    fn pfister_neighbour_examples() {
        let p = QuadricProfile::new(8, 4, 0, vec![0, 4]).unwrap();
        assert_eq!(
            mdt_pfister_neighbour(&p, None).unwrap().to_string(),
            "{{0_lo,3^up}, {1_lo,4^up}, {2_lo,5^up}, {3_lo,6^up}}"
        );
        // dim 5 = 4 + 1, type (2, 1): one binary block plus the type (1, 1) part.
        let p = QuadricProfile::new(5, 2, 1, vec![0, 1, 2]).unwrap();
        let c = QuadricProfile::new(3, 1, 1, vec![0, 1]).unwrap();
        let inner = mdt_height_one(&c).unwrap();
        assert_eq!(
            mdt_pfister_neighbour(&p, Some(&inner)).unwrap().to_string(),
            "{{0_lo,3^up}, {1_lo,2^up}}"
        );
        assert!(matches!(
            mdt_pfister_neighbour(&p, None),
            Err(MdtError::ArityMismatch(_))
        ));
        let bad = QuadricProfile::new(12, 3, 6, vec![0, 1, 3]).unwrap();
        assert!(matches!(
            mdt_pfister_neighbour(&bad, None),
            Err(MdtError::Profile(ProfileError::NotNeighbourEligible { .. }))
        ));
    }

    #[test]
    fn strongly_excellent_example() {
        let (p, part) = mdt_strongly_excellent(&[4, 2], 1).unwrap();
        assert_eq!(p.dim(), 13);
        assert_eq!(
            part.to_string(),
            "{{0_lo,7^up}, {1_lo,8^up}, {2_lo,9^up}, {3_lo,10^up}, {4_lo,11^up}, {5_lo,6^up}}"
        );
    }

    #[test]
    fn isotropic_lift_example() {
        let p = QuadricProfile::new(6, 2, 2, vec![0, 2]).unwrap();
        let inner = mdt_height_one(&p).unwrap();
        let lifted = mdt_isotropic_lift(1, &inner, &p).unwrap();
        assert_eq!(lifted.to_string(), "{{0_lo}, {1_lo,4^up}, {2_lo,5^up}, {6^up}}");
        assert!(matches!(mdt_isotropic_lift(0, &inner, &p), Err(MdtError::InvalidLift)));
    }
}
