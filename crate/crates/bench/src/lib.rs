//! Fixed inputs shared by the benchmarks.

use bautin_core::blowup::ArcSampler;
use bautin_core::kapteyn::{FamilyId, FamilySampler};
use bautin_core::rng::stream;
use bautin_core::Arc;

/// A seeded member of a family with the default sampling box.
pub fn family_arc(id: FamilyId, seed: u64) -> Arc {
    FamilySampler::new(id)
        .sample(&mut stream(seed, 0))
        .expect("built-in families sample")
}

/// A seeded member with the small symbols used for return maps.
pub fn numeric_arc(id: FamilyId, seed: u64) -> Arc {
    FamilySampler::numeric(id)
        .sample(&mut stream(seed, 0))
        .expect("built-in families sample")
}
