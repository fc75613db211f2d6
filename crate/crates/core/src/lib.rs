//! Exact symbolic engine for proximity spaces over finitely presented
//! models: rational interval regions on the line, finite ground sets, and
//! coproducts of such spaces (finite lists and countable template
//! families).
//!
//! The engine computes closeness under the named proximities, verifies the
//! proximity axioms with constructive witnesses, enumerates the finite
//! cluster traces ("germs") of Smirnov compactifications over chosen
//! subalgebras, and checks proximity-dimension certificates. All arithmetic
//! is exact; every operation is a pure function of immutable values.
//!
//! Closeness of two regions under the metric proximity:
//!
//! ```
//! use proxim_core::spaces::{ProximityKind, Space, SpaceSet};
//! use proxim_core::text::parse_region;
//!
//! let metric = Space::real(ProximityKind::Metric)?;
//! let a = SpaceSet::Region(parse_region("[0,1)")?);
//! let b = SpaceSet::Region(parse_region("(1,2]")?);
//! assert!(metric.close(&a, &b)?);
//! assert!(metric.is_separated().separated);
//! # Ok::<(), proxim_core::Error>(())
//! ```
//!
//! Cluster traces over the subalgebra spanned by two rays: three atoms,
//! five germs.
//!
//! ```
//! use proxim_core::germs::{enumerate_germs, GermMode, Limits, Subalgebra};
//! use proxim_core::spaces::{ProximityKind, Space, SpaceSet};
//! use proxim_core::text::parse_region;
//!
//! let space = Space::real(ProximityKind::Metric)?;
//! let rays = vec![
//!     SpaceSet::Region(parse_region("(-inf,0]")?),
//!     SpaceSet::Region(parse_region("[1,inf)")?),
//! ];
//! let algebra = Subalgebra::new(space, rays, &Limits::default())?;
//! assert_eq!(algebra.atom_count(), 3);
//! assert_eq!(enumerate_germs(&algebra, GermMode::All).len(), 5);
//! # Ok::<(), proxim_core::Error>(())
//! ```

pub mod coproduct;
pub mod defs;
pub mod dimension;
pub mod error;
pub mod germs;
pub mod regions;
pub mod sampling;
pub mod scalar;
pub mod spaces;
pub mod text;

pub use error::{Error, Result};

/// Exact rational scalar used by all concrete models.
pub type Rational = num_rational::BigRational;

/// An interval on the line with rational (or symbolically infinite)
/// endpoints.
pub type RealInterval = regions::Interval<Rational>;

/// A normalized finite union of rational intervals on the line.
pub type RealRegion = regions::Region<Rational>;

/// Shorthand for a rational from an integer literal.
pub fn rat(n: i64) -> Rational {
    Rational::from_integer(n.into())
}
