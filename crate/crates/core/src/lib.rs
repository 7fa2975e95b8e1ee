//! Link invariants from planar diagrams (Kauffman bracket, Jones and Conway
//! polynomials, integral Khovanov homology) and the positivity obstructions
//! built from their extreme degrees.

pub mod batch;
pub mod conway;
pub mod diagram;
pub mod fixtures;
pub mod ingest;
pub mod jones;
pub mod khovanov;
pub mod laurent;
pub mod obstruction;
pub mod snf;
pub mod survey;

pub use diagram::{braid_closure, parse_braid, parse_pd, BraidWord, Diagram, DiagramError, OrientedDiagram, Sign, State};
pub use laurent::{HalfInt, LaurentPoly, PolyError};
