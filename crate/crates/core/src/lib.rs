pub mod cones;
pub mod curve;
pub mod error;
pub mod gfan;
pub mod groebner;
pub mod lattice;
pub mod nash;
pub mod polyalg;
pub mod semigroups;

pub use error::{Error, Result};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/lattices-and-cones.md")]
    mod lattices_and_cones {}
    #[doc = include_str!("../../../book/src/semigroups.md")]
    mod semigroups {}
    #[doc = include_str!("../../../book/src/groebner.md")]
    mod groebner {}
    #[doc = include_str!("../../../book/src/groebner-fans.md")]
    mod groebner_fans {}
    #[doc = include_str!("../../../book/src/nash.md")]
    mod nash {}
    #[doc = include_str!("../../../book/src/curves.md")]
    mod curves {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
