use std::fmt;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Ground level of a two-level particle.
pub const G: usize = 0;
/// Excited level of a two-level particle.
pub const E: usize = 1;

/// The kind of a single tensor factor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SubsystemKind {
    /// Target particle with basis {g, e}.
    TwoLevel,
    /// Field mode truncated to occupations `0..=cutoff`.
    BosonicMode { cutoff: usize },
    /// Hard-core mode with occupations {0, 1}. No sign strings are attached.
    FermionicMode,
}

impl SubsystemKind {
    pub fn bosonic(cutoff: usize) -> Result<Self> {
        if cutoff < 1 {
            return Err(Error::InvalidCutoff(cutoff));
        }
        Ok(Self::BosonicMode { cutoff })
    }

    pub fn dim(self) -> usize {
        match self {
            Self::TwoLevel | Self::FermionicMode => 2,
            Self::BosonicMode { cutoff } => cutoff + 1,
        }
    }

    pub fn is_mode(self) -> bool {
        !matches!(self, Self::TwoLevel)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Subsystem {
    pub label: String,
    pub kind: SubsystemKind,
}

/// Ordered list of labelled subsystems.
///
/// Basis states are enumerated row-major over the subsystem list: the first
/// subsystem varies slowest. Every Kronecker product, embedding and partial
/// trace in the crate relies on that ordering.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SystemLayout {
    subsystems: Vec<Subsystem>,
    strides: Vec<usize>,
    dim: usize,
}

impl SystemLayout {
    pub fn new<I, S>(subsystems: I) -> Result<Self>
    where
        I: IntoIterator<Item = (S, SubsystemKind)>,
        S: Into<String>,
    {
        let subsystems: Vec<Subsystem> = subsystems
            .into_iter()
            .map(|(label, kind)| Subsystem { label: label.into(), kind })
            .collect();
        if subsystems.is_empty() {
            return Err(Error::EmptyLayout);
        }
        for (i, s) in subsystems.iter().enumerate() {
            if let SubsystemKind::BosonicMode { cutoff } = s.kind {
                if cutoff < 1 {
                    return Err(Error::InvalidCutoff(cutoff));
                }
            }
            if subsystems[..i].iter().any(|o| o.label == s.label) {
                return Err(Error::DuplicateLabel(s.label.clone()));
            }
        }
        let mut strides = vec![1; subsystems.len()];
        for i in (0..subsystems.len().saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * subsystems[i + 1].kind.dim();
        }
        let dim = strides[0] * subsystems[0].kind.dim();
        Ok(Self { subsystems, strides, dim })
    }

    pub fn single(label: impl Into<String>, kind: SubsystemKind) -> Result<Self> {
        Self::new([(label.into(), kind)])
    }

    /// Total Hilbert-space dimension.
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.subsystems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subsystems.is_empty()
    }

    pub fn subsystems(&self) -> &[Subsystem] {
        &self.subsystems
    }

    pub fn dims(&self) -> impl Iterator<Item = usize> + '_ {
        self.subsystems.iter().map(|s| s.kind.dim())
    }

    pub fn labels(&self) -> impl Iterator<Item = &str> {
        self.subsystems.iter().map(|s| s.label.as_str())
    }

    pub fn position(&self, label: &str) -> Result<usize> {
        self.subsystems
            .iter()
            .position(|s| s.label == label)
            .ok_or_else(|| Error::UnknownLabel(label.to_owned()))
    }

    pub fn kind(&self, label: &str) -> Result<SubsystemKind> {
        Ok(self.subsystems[self.position(label)?].kind)
    }

    pub(crate) fn stride(&self, pos: usize) -> usize {
        self.strides[pos]
    }

    pub(crate) fn dim_at(&self, pos: usize) -> usize {
        self.subsystems[pos].kind.dim()
    }

    /// Flat basis index of a list of per-subsystem levels.
    pub fn index_of(&self, levels: &[usize]) -> Result<usize> {
        if levels.len() != self.subsystems.len() {
            return Err(Error::LengthMismatch { expected: self.subsystems.len(), got: levels.len() });
        }
        let mut idx = 0;
        for (pos, (&level, s)) in levels.iter().zip(&self.subsystems).enumerate() {
            let dim = s.kind.dim();
            if level >= dim {
                return Err(Error::LevelOutOfRange { label: s.label.clone(), level, dim });
            }
            idx += level * self.strides[pos];
        }
        Ok(idx)
    }

    /// Per-subsystem levels of a flat basis index.
    pub fn levels_of(&self, index: usize) -> Vec<usize> {
        self.strides
            .iter()
            .zip(self.dims())
            .map(|(&stride, dim)| (index / stride) % dim)
            .collect()
    }

    /// Layout of `self` followed by `other`.
    pub fn concat(&self, other: &SystemLayout) -> Result<SystemLayout> {
        Self::new(
            self.subsystems
                .iter()
                .chain(&other.subsystems)
                .map(|s| (s.label.clone(), s.kind)),
        )
    }

    /// Sub-layout holding the given labels, in the order they appear in `self`.
    pub fn restrict(&self, keep: &[&str]) -> Result<SystemLayout> {
        let positions = self.positions(keep)?;
        let mut sorted = positions;
        sorted.sort_unstable();
        Self::new(sorted.into_iter().map(|p| {
            let s = &self.subsystems[p];
            (s.label.clone(), s.kind)
        }))
    }

    pub(crate) fn positions(&self, labels: &[&str]) -> Result<Vec<usize>> {
        let mut out = Vec::with_capacity(labels.len());
        for label in labels {
            let p = self.position(label)?;
            if out.contains(&p) {
                return Err(Error::DuplicateLabel((*label).to_owned()));
            }
            out.push(p);
        }
        Ok(out)
    }
}

impl fmt::Debug for SystemLayout {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list()
            .entries(self.subsystems.iter().map(|s| (&s.label, s.kind)))
            .finish()
    }
}

/// Builds a layout from `(label, kind)` pairs.
pub fn compose_layout<S: Into<String>>(
    subsystems: impl IntoIterator<Item = (S, SubsystemKind)>,
) -> Result<SystemLayout> {
    SystemLayout::new(subsystems)
}

/// Helper for walking every basis index that shares the levels of a set of
/// "kept" positions while the remaining positions range freely.
pub(crate) struct Split {
    pub kept_offsets: Vec<usize>,
    pub traced_offsets: Vec<usize>,
}

impl Split {
    /// `targets` are positions whose joint index is enumerated row-major in the
    /// given order; every other position is "traced".
    pub fn new(layout: &SystemLayout, targets: &[usize]) -> Self {
        let kept_offsets = offsets(layout, targets);
        let rest: Vec<usize> = (0..layout.len()).filter(|p| !targets.contains(p)).collect();
        let traced_offsets = offsets(layout, &rest);
        Self { kept_offsets, traced_offsets }
    }
}

/// Flat offsets contributed by every joint level of `positions`, enumerated
/// row-major in the order given.
fn offsets(layout: &SystemLayout, positions: &[usize]) -> Vec<usize> {
    let mut out = vec![0usize];
    for &p in positions {
        let (stride, dim) = (layout.stride(p), layout.dim_at(p));
        out = out
            .iter()
            .flat_map(|&base| (0..dim).map(move |l| base + l * stride))
            .collect();
    }
    out
}
