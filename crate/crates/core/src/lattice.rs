//! Finite windows onto the integer line.

use std::fmt;

use crate::error::{Result, WalkError};

/// Probability below which a boundary site counts as empty.
///
/// The momentum-space backends leave round-off of order 1e-16 in amplitude on
/// every site, i.e. 1e-32 in probability.
pub const BOUNDARY_PROBABILITY_TOL: f64 = 1e-20;

/// How the two ends of the window are treated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Boundary {
    /// Sites `-h` and `+h` are neighbours.
    Periodic,
    /// The outermost sites must stay empty, so a window of half-width `h >= N + 1`
    /// reproduces `N` steps on the infinite line exactly.
    #[default]
    Guarded,
}

impl fmt::Display for Boundary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Boundary::Periodic => f.write_str("periodic"),
            Boundary::Guarded => f.write_str("guarded"),
        }
    }
}

/// Sites `x ∈ [-half_width, +half_width]` with unit spacing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Lattice {
    half_width: usize,
    boundary: Boundary,
}

impl Lattice {
    pub fn new(half_width: usize, boundary: Boundary) -> Result<Self> {
        if half_width == 0 {
            return Err(WalkError::InvalidParameter {
                name: "half_width",
                reason: "must be a positive integer".into(),
            });
        }
        Ok(Self { half_width, boundary })
    }

    /// Guarded window; panics on `half_width == 0`.
    pub fn guarded(half_width: usize) -> Self {
        Self::new(half_width, Boundary::Guarded).expect("half_width must be positive")
    }

    /// Periodic window; panics on `half_width == 0`.
    pub fn periodic(half_width: usize) -> Self {
        Self::new(half_width, Boundary::Periodic).expect("half_width must be positive")
    }

    pub fn half_width(&self) -> usize {
        self.half_width
    }

    pub fn boundary(&self) -> Boundary {
        self.boundary
    }

    /// `2 * half_width + 1`.
    pub fn sites(&self) -> usize {
        2 * self.half_width + 1
    }

    /// Storage index of position `x`, if `x` lies in the window.
    pub fn index_of(&self, x: i64) -> Option<usize> {
        let h = self.half_width as i64;
        (-h..=h).contains(&x).then(|| (x + h) as usize)
    }

    /// Position of storage index `i`.
    pub fn position(&self, i: usize) -> i64 {
        i as i64 - self.half_width as i64
    }

    pub fn positions(&self) -> impl Iterator<Item = i64> + '_ {
        (0..self.sites()).map(|i| self.position(i))
    }

    /// Index reached from `i` by moving `delta` sites. Periodic windows wrap;
    /// guarded windows return `None` when the move leaves the window.
    pub fn step(&self, i: usize, delta: i64) -> Option<usize> {
        let n = self.sites() as i64;
        let j = i as i64 + delta;
        match self.boundary {
            Boundary::Periodic => Some(j.rem_euclid(n) as usize),
            Boundary::Guarded => (0..n).contains(&j).then_some(j as usize),
        }
    }

    /// Fails with [`WalkError::BoundaryViolation`] when a guarded window carries
    /// probability on either outermost site. `site_probability(i)` is the total
    /// probability on storage index `i`.
    pub fn check_guard(&self, site_probability: impl Fn(usize) -> f64) -> Result<()> {
        if self.boundary == Boundary::Periodic {
            return Ok(());
        }
        for i in [0, self.sites() - 1] {
            let p = site_probability(i);
            if p > BOUNDARY_PROBABILITY_TOL {
                return Err(WalkError::BoundaryViolation {
                    site: self.position(i),
                    probability: p,
                });
            }
        }
        Ok(())
    }

    /// Enough room for `steps` guarded steps from the origin.
    pub fn fits_steps(&self, steps: usize) -> bool {
        self.boundary == Boundary::Periodic || self.half_width > steps
    }

    pub(crate) fn ensure_same(&self, other: &Lattice) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(WalkError::LatticeMismatch {
                left: self.to_string(),
                right: other.to_string(),
            })
        }
    }
}

impl fmt::Display for Lattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} lattice, half-width {}", self.boundary, self.half_width)
    }
}
