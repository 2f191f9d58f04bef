use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{EntropyError, LabelDistribution, PairDistribution, Provenance};
use crate::rules::{EdgeRegion, Endpoint, LocalRule};

/// Samples per deterministic substream. Block `b` draws from stream `b` of
/// the master seed, so results do not depend on the thread count.
pub const MC_BLOCK: u64 = 4096;

/// Plug-in laws from `n_samples` independent edge-ball configurations.
///
/// Each sample contributes one ordered pair and both endpoint labels to the
/// vertex law, which therefore equals the marginal of the symmetrized pair law.
pub fn mc_marginals(
    rule: &LocalRule,
    n_samples: u64,
    rng_seed: u64,
) -> Result<(LabelDistribution, PairDistribution), EntropyError> {
    if n_samples == 0 {
        return Err(EntropyError::InvalidParams("n_samples must be at least 1".into()));
    }
    let k = rule.output_alphabet().len();
    let region = EdgeRegion::new(rule.d(), rule.t());
    let blocks = n_samples.div_ceil(MC_BLOCK);
    let counts = (0..blocks)
        .into_par_iter()
        .map(|b| {
            let len = MC_BLOCK.min(n_samples - b * MC_BLOCK);
            sample_block(rule, &region, rng_seed, b, len)
        })
        .reduce(
            || vec![0u64; k * k],
            |mut acc, c| {
                acc.iter_mut().zip(c).for_each(|(a, x)| *a += x);
                acc
            },
        );
    let provenance = Provenance::MonteCarlo { n_samples };
    let denom = 2.0 * n_samples as f64;
    let q: Vec<Vec<f64>> =
        (0..k).map(|a| (0..k).map(|b| (counts[a * k + b] + counts[b * k + a]) as f64 / denom).collect()).collect();
    let p: Vec<f64> =
        (0..k).map(|a| (0..k).map(|b| counts[a * k + b] + counts[b * k + a]).sum::<u64>() as f64 / denom).collect();
    let labels = rule.output_alphabet().to_vec();
    Ok((LabelDistribution::new(labels.clone(), p, provenance)?, PairDistribution::new(labels, q, provenance)?))
}

fn sample_block(rule: &LocalRule, region: &EdgeRegion, seed: u64, block: u64, len: u64) -> Vec<u64> {
    let k = rule.output_alphabet().len();
    let model = rule.model();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(block);
    let n = region.size();
    let mut tags = vec![0u8; if model.tags().is_some() { n } else { 0 }];
    let mut keys = vec![0u128; if model.has_ranks() { n } else { 0 }];
    let mut counts = vec![0u64; k * k];
    for _ in 0..len {
        if let Some(q) = model.tags() {
            tags.iter_mut().for_each(|x| *x = rng.random_range(0..q));
        }
        // The position in the low bits breaks 64-bit ties deterministically.
        for (pos, key) in keys.iter_mut().enumerate() {
            *key = ((rng.next_u64() as u128) << 32) | pos as u128;
        }
        let out = |e| {
            let code = region.code_at(e, model, &tags, &keys);
            rule.output_for_code(&code).expect("sampled ball is in the catalog") as usize
        };
        counts[out(Endpoint::U) * k + out(Endpoint::V)] += 1;
    }
    counts
}
