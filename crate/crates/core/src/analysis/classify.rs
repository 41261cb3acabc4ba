use num_traits::Float;
use serde::{Deserialize, Serialize};

use crate::eigensolver::Spectrum;
use crate::error::{DiracError, Result};
use crate::physics::{reference_binding, reference_spectrum, OperatorParams, ReferenceLevel};
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Label {
    Genuine,
    /// Unphysical value interleaved among genuine levels.
    InstilledSpurious,
    /// Copy of the opposite series' ground state inside a `kappa > 0` series.
    CoincidenceSpurious,
    /// Above the last matched level and not recognisably spurious, usually an
    /// unconverged high level.
    Unmatched,
}

impl Label {
    pub fn is_spurious(self) -> bool {
        matches!(self, Self::InstilledSpurious | Self::CoincidenceSpurious)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Self::Genuine => "genuine",
            Self::InstilledSpurious => "instilled-spurious",
            Self::CoincidenceSpurious => "coincidence-spurious",
            Self::Unmatched => "unmatched",
        }
    }
}

impl std::fmt::Display for Label {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassifiedEntry<T> {
    pub binding: T,
    pub label: Label,
    pub reference: Option<ReferenceLevel<T>>,
    /// `|binding - reference| / |reference|` for genuine entries.
    pub rel_error: Option<T>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassifiedSpectrum<T> {
    pub entries: Vec<ClassifiedEntry<T>>,
}

impl<T: Real> ClassifiedSpectrum<T> {
    pub fn count(&self, label: Label) -> usize {
        self.entries.iter().filter(|e| e.label == label).count()
    }

    pub fn genuine(&self) -> impl Iterator<Item = &ClassifiedEntry<T>> {
        self.entries.iter().filter(|e| e.label == Label::Genuine)
    }

    /// Entry matched to reference index `level` (0-based within the series).
    pub fn matched(
        &self,
        level: usize,
        reference: &[ReferenceLevel<T>],
    ) -> Option<&ClassifiedEntry<T>> {
        let target = reference.get(level)?;
        self.entries
            .iter()
            .find(|e| e.reference.as_ref().is_some_and(|r| r.n_r == target.n_r))
    }

    /// Spurious entries whose binding lies strictly between reference levels
    /// `lo` and `lo + 1` (0-based).
    pub fn spurious_between(&self, reference: &[ReferenceLevel<T>], lo: usize) -> usize {
        let (Some(a), Some(b)) = (reference.get(lo), reference.get(lo + 1)) else {
            return 0;
        };
        self.entries
            .iter()
            .filter(|e| {
                e.label == Label::InstilledSpurious
                    && e.binding > a.binding
                    && e.binding < b.binding
            })
            .count()
    }
}

fn is_sorted<T: PartialOrd>(values: impl Iterator<Item = T>) -> bool {
    let mut prev: Option<T> = None;
    for v in values {
        if let Some(p) = &prev {
            if !(*p <= v) {
                return false;
            }
        }
        prev = Some(v);
    }
    true
}

fn close<T: Real>(value: T, target: T, tol: T) -> bool {
    Float::abs(value - target) <= tol * Float::abs(target)
}

/// Labels computed bindings against an exact series.
///
/// Both lists are ascending bindings. Matching is greedy and in order: a
/// reference level that the current value has already passed is skipped.
/// `opposite_kappa_ground` is the lowest binding of the `-kappa` series and is
/// only consulted when the reference series has `kappa > 0`.
pub fn classify<T: Real>(
    computed: &[T],
    reference: &[ReferenceLevel<T>],
    opposite_kappa_ground: Option<T>,
    match_tol: T,
) -> Result<ClassifiedSpectrum<T>> {
    if !(match_tol > T::zero() && match_tol < T::lit(0.1)) {
        return Err(DiracError::InvalidTolerance(match_tol.to_f64_lossy()));
    }
    if computed.iter().any(|v| !v.is_finite())
        || !is_sorted(computed.iter())
        || !is_sorted(reference.iter().map(|r| r.binding))
    {
        return Err(DiracError::UnorderedInput);
    }

    let mut matched: Vec<Option<usize>> = vec![None; computed.len()];
    let mut next = 0;
    for (slot, &v) in matched.iter_mut().zip(computed) {
        while next < reference.len() {
            let r = reference[next].binding;
            if close(v, r, match_tol) {
                *slot = Some(next);
                next += 1;
                break;
            }
            if v > r {
                next += 1;
            } else {
                break;
            }
        }
    }

    let positive_kappa = reference.first().is_some_and(|r| r.kappa > 0);
    let ground = reference.first().map(|r| r.binding);
    let entries = computed
        .iter()
        .enumerate()
        .map(|(i, &binding)| {
            if let Some(r) = matched[i] {
                let level = reference[r];
                return ClassifiedEntry {
                    binding,
                    label: Label::Genuine,
                    reference: Some(level),
                    rel_error: Some(
                        Float::abs(binding - level.binding) / Float::abs(level.binding),
                    ),
                };
            }
            let coincides = positive_kappa
                && opposite_kappa_ground.is_some_and(|g| close(binding, g, match_tol));
            let below = matched[..i].iter().any(Option::is_some);
            let above = matched[i + 1..].iter().any(Option::is_some);
            let label = if coincides {
                Label::CoincidenceSpurious
            } else if (below && above) || ground.is_some_and(|g| binding < g) {
                Label::InstilledSpurious
            } else {
                Label::Unmatched
            };
            ClassifiedEntry {
                binding,
                label,
                reference: None,
                rel_error: None,
            }
        })
        .collect();
    Ok(ClassifiedSpectrum { entries })
}

/// Classification of the lowest levels of one computed series.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevelClassification<T> {
    pub reference: Vec<ReferenceLevel<T>>,
    pub opposite_ground: Option<T>,
    pub classified: ClassifiedSpectrum<T>,
}

/// Classifies enough of the lowest `bindings` to cover `levels` physical
/// levels plus every spurious value found among them. Every value below the
/// midpoint between the last requested level and the next exact one is
/// included.
pub fn classify_levels<T: Real>(
    bindings: &[T],
    params: &OperatorParams<T>,
    levels: usize,
    match_tol: T,
) -> Result<LevelClassification<T>> {
    if levels == 0 {
        return Err(DiracError::InvalidCount("need at least one level".into()));
    }
    let mut reference = reference_spectrum(params, levels + 1)?;
    let next = reference
        .pop()
        .expect("levels + 1 reference values")
        .binding;
    let opposite_ground = if params.kappa() > 0 {
        Some(reference_binding(&params.flipped(), 0)?.binding)
    } else {
        None
    };
    let cutoff = (reference[levels - 1].binding + next) / T::lit(2.0);
    let below = bindings.iter().take_while(|&&v| v < cutoff).count();
    let mut take = levels.max(below).min(bindings.len());
    loop {
        let classified = classify(&bindings[..take], &reference, opposite_ground, match_tol)?;
        let spurious = classified
            .entries
            .iter()
            .filter(|e| e.label.is_spurious())
            .count();
        let want = (levels + spurious).min(bindings.len());
        if want <= take {
            return Ok(LevelClassification {
                reference,
                opposite_ground,
                classified,
            });
        }
        take = want;
    }
}

/// One row of the level-by-level comparison of the two `kappa` series.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoincidencePair<T> {
    /// 1-based row.
    pub level: usize,
    pub positive: T,
    pub negative: T,
    pub rel_gap: T,
    pub coincide: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoincidenceReport<T> {
    /// First `kappa > 0` binding equals the `kappa < 0` ground state.
    pub present: bool,
    pub first_positive: Option<T>,
    pub first_negative: Option<T>,
    pub pairs: Vec<CoincidencePair<T>>,
}

/// Compares the lowest bindings of the two series row by row.
pub fn coincidence_report<T: Real>(
    positive: &Spectrum<T>,
    negative: &Spectrum<T>,
    tol: T,
) -> CoincidenceReport<T> {
    let pairs: Vec<_> = positive
        .bindings
        .iter()
        .zip(&negative.bindings)
        .enumerate()
        .map(|(i, (&p, &n))| {
            let rel_gap = Float::abs(p - n) / Float::max(Float::abs(n), T::min_positive_value());
            CoincidencePair {
                level: i + 1,
                positive: p,
                negative: n,
                rel_gap,
                coincide: rel_gap <= tol,
            }
        })
        .collect();
    CoincidenceReport {
        present: pairs.first().is_some_and(|p| p.coincide),
        first_positive: positive.bindings.first().copied(),
        first_negative: negative.bindings.first().copied(),
        pairs,
    }
}
