//! Reference diagrams and published invariants used by the tests, the
//! acceptance suite and the CLI examples.

use crate::diagram::{braid_closure, parse_braid, parse_pd, Diagram};

pub const TREFOIL_PD: &str = "PD[X[1,4,2,5],X[3,6,4,1],X[5,2,6,3]]";
pub const MIRROR_TREFOIL_PD: &str = "PD[X[4,2,5,1],X[6,4,1,3],X[2,6,3,5]]";
/// A positive 7-crossing diagram of 7_4 (the pretzel P(3,3,1) reading).
pub const K7_4_PD: &str =
    "PD[X[9,14,10,1],X[1,8,2,9],X[7,2,8,3],X[5,10,6,11],X[11,4,12,5],X[3,12,4,13],X[13,6,14,7]]";
pub const HOPF_BRAID: &str = "strands=2; 1 1";

/// Trefoil diagrams carrying extra Reidemeister I/II crossings.
pub const PERTURBED_TREFOILS: [&str; 3] = ["strands=2; 1 1 1 1 -1", "strands=3; 1 1 1 -2", "strands=4; 1 1 1 2 -3"];

pub const TREFOIL_JONES: &str = "t + t^3 - t^4";
pub const K7_4_JONES: &str = "t - 2t^2 + 3t^3 - 2t^4 + 3t^5 - 2t^6 + t^7 - t^8";
pub const K7_4_UNNORMALIZED: &str = "q - q^3 + q^5 + q^7 + q^9 + q^11 - q^13 - q^17";

/// Khovanov homology of 7_4 from the Knot Atlas chart.
pub const K7_4_KH: &str = "q + q^3 + 2tq^3 + t^2q^5 + 2t^2q^5T^2 + 2t^2q^7 + t^3q^7 + t^3q^7T^2 + t^3q^9 \
    + 2t^4q^9 + t^4q^9T^2 + t^4q^11 + 2t^5q^11T^2 + 2t^5q^13 + t^6q^13 + t^7q^15T^2 + t^7q^17";

pub const K12N749_JONES: &str = "t^3 + t^5 - t^6 + t^7 - t^8 + t^9 - t^10";
/// Unreduced integral Khovanov polynomial of 12n749, with parenthesized
/// coefficients and braces as typeset in the published display.
pub const K12N749_KH: &str = "(1 + t)q^{3} + q^{5} + (2 t^{2}  + t^{3})q^{7} +  t^{4}q^9 + (t^{3} + 2 t^{4} + t^{5})q^{11} + (t^{5} + t^{6}) q^{13} + (t^{5} + t^{6}) q^{15}  + (t^{7}  + t^{8}) q^{17} + t^{9} q^{21} \
    + t^{2} q^{5} T^{2} + t^{3} q^{9} T^{2} + t^{4} q^{9} T^{2} + t^{6} q^{13} T^{2} + t^{7} q^{15} T^{2} + t^{9} q^{19} T^{2}";

pub fn trefoil() -> Diagram {
    parse_pd(TREFOIL_PD).expect("fixture parses")
}

pub fn mirror_trefoil() -> Diagram {
    parse_pd(MIRROR_TREFOIL_PD).expect("fixture parses")
}

pub fn knot_7_4() -> Diagram {
    parse_pd(K7_4_PD).expect("fixture parses")
}

pub fn hopf() -> Diagram {
    braid(HOPF_BRAID)
}

pub fn braid(word: &str) -> Diagram {
    braid_closure(&parse_braid(word).expect("fixture parses"))
}
