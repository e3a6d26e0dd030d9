//! Cross-checks exhaustive enumeration against orbit closure from a Welch
//! seed, both quotiented by the anchor value at the first defined position so
//! the enumerator's anchoring and the addition generator do not double-count.

use crate::array::PeriodicArray;
use crate::enumerator::{enumerate, SearchConfig, SearchStats};
use crate::error::Result;
use crate::field::{FieldSpec, FieldTable};
use crate::grid::GroupSpec;
use crate::symmetry::{orbit_closure, GeneratorFamily};
use crate::welch::construct_welch;
use std::collections::BTreeSet;

/// The Welch array for the lexicographically smallest primitive polynomial
/// and log base 1; the canonical closure seed for an elementary group.
pub fn default_welch_seed(spec: &GroupSpec) -> Result<PeriodicArray> {
    let p = spec
        .elementary_prime()
        .ok_or_else(|| crate::error::Error::NonElementaryGroup(spec.to_string()))?;
    let fspec = FieldSpec::default_poly(p, spec.rank())?;
    construct_welch(&FieldTable::build(fspec, 1)?)
}

/// Outcome of one characterization run.
#[derive(Debug, Clone)]
pub struct CharacterizationReport {
    /// Canonical forms from anchored exhaustive enumeration.
    pub enumerated: BTreeSet<Vec<u8>>,
    /// Anchored slice of the orbit closure from the default Welch seed.
    pub closure_slice: BTreeSet<Vec<u8>>,
    /// Size of the full (unanchored) closure; 0 for non-elementary groups.
    pub closure_total: usize,
    pub search: SearchStats,
}

impl CharacterizationReport {
    pub fn equal(&self) -> bool {
        self.enumerated == self.closure_slice
    }

    pub fn symmetric_difference_size(&self) -> usize {
        self.enumerated
            .symmetric_difference(&self.closure_slice)
            .count()
    }
}

/// Runs anchored enumeration and, over elementary abelian groups, the orbit
/// closure from the default Welch seed under {Add, Mul, G1, G2}. For groups
/// with no Welch construction the closure side is empty.
pub fn characterize(spec: &GroupSpec, anchor: u32) -> Result<CharacterizationReport> {
    let cfg = SearchConfig::new(spec.clone()).with_anchor(anchor)?;
    let mut enumerated = BTreeSet::new();
    let search = enumerate(&cfg, |arr| {
        enumerated.insert(arr.canonical_bytes());
    })?;

    let (closure_slice, closure_total) = if spec.is_elementary_abelian() {
        let seed = default_welch_seed(spec)?;
        let closure = orbit_closure(
            &[seed],
            &[
                GeneratorFamily::Add,
                GeneratorFamily::Mul,
                GeneratorFamily::G1,
                GeneratorFamily::G2,
            ],
            false,
        )?;
        let total = closure.len();
        let slice = closure
            .into_iter()
            .filter(|bytes| {
                PeriodicArray::parse_bytes(bytes)
                    .map(|a| a.value_at(1) == Some(anchor))
                    .unwrap_or(false)
            })
            .collect();
        (slice, total)
    } else {
        (BTreeSet::new(), 0)
    };

    Ok(CharacterizationReport {
        enumerated,
        closure_slice,
        closure_total,
        search,
    })
}
