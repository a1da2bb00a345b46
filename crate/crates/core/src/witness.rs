//! Searches for small syndromes that exhibit the decoding pitfalls the
//! symmetry machinery is meant to fix.

use crate::code::{CodeGeometry, LogicalLabel, PauliChain, Syndrome};
use crate::error::Result;
use crate::matching::Underlying;
use crate::noise::{rng_stream, sample_error};
use crate::symmetry::{
    align, antitransposition_representant, center, translate_chain, translate_syndrome, wrapped_decode,
    SymmetryMode,
};
use rand::Rng;

/// Two syndromes related by a translation whose plain MWPM recoveries are
/// not related by that translation but differ by a logical X operator.
#[derive(Debug, Clone)]
pub struct TranslationWitness {
    pub first: Syndrome,
    pub second: Syndrome,
    pub shift: (isize, isize),
    pub plain_first: PauliChain,
    pub plain_second: PauliChain,
    /// Logical class of `T(plain_first) · plain_second`.
    pub plain_difference: LogicalLabel,
    pub centered_first: PauliChain,
    pub centered_second: PauliChain,
}

/// Exhaustive search on the 2×2 code over all syndromes and the one-step
/// horizontal translation.
pub fn find_translation_witness() -> Result<Option<TranslationWitness>> {
    let g = CodeGeometry::new(2)?;
    let shift = (0, 1);
    let n = g.syndrome_len();
    for mask in 0u32..(1 << n) {
        let mut first = Syndrome::zeros(n);
        for i in 0..n {
            if mask >> i & 1 == 1 {
                first.flip(i);
            }
        }
        if first.vertex_detections().len() % 2 == 1 || first.plaquette_detections().len() % 2 == 1 {
            continue;
        }
        let second = translate_syndrome(&g, &first, shift.0, shift.1)?;
        let plain_first = Underlying::Mwpm.decode(&g, &first)?;
        let plain_second = Underlying::Mwpm.decode(&g, &second)?;
        let diff = translate_chain(&g, &plain_first, shift.0, shift.1)?.multiply(&plain_second)?;
        let plain_difference = g.logical_class(&diff)?;
        if plain_difference == LogicalLabel::IDENTITY || !diff.z_support().not_any() {
            continue;
        }
        let centered_first = wrapped_decode(&g, Underlying::Mwpm, SymmetryMode::Center, &first)?;
        let centered_second = wrapped_decode(&g, Underlying::Mwpm, SymmetryMode::Center, &second)?;
        if translate_chain(&g, &centered_first, shift.0, shift.1)? != centered_second {
            continue;
        }
        return Ok(Some(TranslationWitness {
            first,
            second,
            shift,
            plain_first,
            plain_second,
            plain_difference,
            centered_first,
            centered_second,
        }));
    }
    Ok(None)
}

/// Anti-transposition representant first, then centering.
pub fn naive_align(g: &CodeGeometry, s: &Syndrome) -> Result<Syndrome> {
    let (rep, _) = antitransposition_representant(g, s)?;
    Ok(center(g, &rep)?.0)
}

/// Two translated 3×3 syndromes on which [`naive_align`] disagrees while
/// [`align`] agrees.
#[derive(Debug, Clone)]
pub struct NaiveAlignWitness {
    pub first: Syndrome,
    pub second: Syndrome,
    pub shift: (isize, isize),
    pub naive_first: Syndrome,
    pub naive_second: Syndrome,
    pub aligned: Syndrome,
}

/// Randomized search over errors at noise `p` on the 3×3 code.
pub fn find_naive_align_witness(seed: u64, attempts: usize, p: f64) -> Result<Option<NaiveAlignWitness>> {
    let g = CodeGeometry::new(3)?;
    let mut rng = rng_stream(seed, 0);
    for _ in 0..attempts {
        let first = g.syndrome_of(&sample_error(&g, p, &mut rng))?;
        let shift = (rng.gen_range(0..3), rng.gen_range(0..3));
        let second = translate_syndrome(&g, &first, shift.0, shift.1)?;
        let naive_first = naive_align(&g, &first)?;
        let naive_second = naive_align(&g, &second)?;
        if naive_first == naive_second {
            continue;
        }
        let aligned = align(&g, &first)?.0;
        if align(&g, &second)?.0 != aligned {
            continue;
        }
        return Ok(Some(NaiveAlignWitness { first, second, shift, naive_first, naive_second, aligned }));
    }
    Ok(None)
}
