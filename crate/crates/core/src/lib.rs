//! Exact algorithms for weak commensurability of semisimple elements,
//! Frobenius-based genericity certificates, geodesic length data and local
//! invariants of rational quadratic forms.

pub mod arithlocal;
pub mod exactnum;
pub mod genericity;
pub mod rootsys;
pub mod spectra;
pub mod weakcomm;
