//! Combinatorial calculus of mod-2 rational cycles on products of quadrics in
//! characteristic 2, with a constraint engine for motivic decomposition types.
//!
//! * [`profile`]: dimensions, types `(r, s)`, splitting patterns and their
//!   numeric invariants.
//! * [`chow`]: the F2-algebra `R_X` with Steenrod operations.
//! * [`corr`]: composition and the other correspondence operations.
//! * [`mdt`]: the symbol set `Lambda(X)`, the rule library, the partition
//!   enumerator, closed-form partitions and shell diagrams.

pub mod chow;
pub mod corr;
pub mod mdt;
pub mod profile;
