//! Shared fixtures for the benchmark targets: one witness family on the
//! critical profile and one mixed random batch from the corpus generator.

use morrey_core::{
    build_witnesses, corpus, QuotientWitnesses, RadialFunction, SpaceParams, Variant,
};

pub fn small_space() -> SpaceParams {
    SpaceParams::new(2, 1.0, 2.0, Variant::Small).expect("valid parameters")
}

pub fn witnesses() -> QuotientWitnesses {
    build_witnesses(0.01, 0.01, &small_space()).expect("valid witness family")
}

/// A deterministic batch of corpus functions paired with their spaces.
pub fn random_batch(n: usize) -> Vec<(RadialFunction, SpaceParams)> {
    let mut rng = corpus::rng(0x6d6f72);
    (0..n)
        .map(|i| {
            let d = corpus::DIMS[i % corpus::DIMS.len()];
            let variant = if i % 2 == 0 {
                Variant::Classical
            } else {
                Variant::Small
            };
            let sp = corpus::random_space(&mut rng, d, variant);
            let f = corpus::random_function(&mut rng, &sp);
            (f, sp)
        })
        .collect()
}
