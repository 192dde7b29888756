//! Small hand-checkable germs, one per case shape.

use crate::germ::SkewGerm;

/// A named germ given by its two component expressions.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Fixture {
    pub name: &'static str,
    pub p: &'static str,
    pub q: &'static str,
    pub summary: &'static str,
}

impl Fixture {
    pub fn germ(&self) -> SkewGerm {
        SkewGerm::parse(self.p, self.q).expect("fixture germs are valid")
    }
}

/// Monomial germ, single polygon vertex.
pub const G1: Fixture = Fixture {
    name: "G1",
    p: "z^2",
    q: "z*w",
    summary: "monomial, Case 1",
};

/// Dominant term is the last vertex, `l_1 = 2 > 1`.
pub const G2: Fixture = Fixture {
    name: "G2",
    p: "z^2",
    q: "z^3*w + z*w^2",
    summary: "Case 2, gamma = 3, d = 1",
};

/// Dominant term is the first vertex with `γ = 0`.
pub const G3: Fixture = Fixture {
    name: "G3",
    p: "z^3",
    q: "w^2 + z*w",
    summary: "Case 3, gamma = 0, d = 2",
};

/// Middle vertex `(1,1)` of a three-vertex polygon.
pub const G4: Fixture = Fixture {
    name: "G4",
    p: "z^2",
    q: "w^3 + z*w + z^3",
    summary: "Case 4, T_2 < delta < T_1",
};

/// `d = 0` with `δ` on the intercept; the edge sum cancels `z^4` in `Q^2`.
pub const G5: Fixture = Fixture {
    name: "G5",
    p: "z^2",
    q: "-2*w^2 + z*w + z^2",
    summary: "Case 2, d = 0, delta = T, vanishing at n = 2",
};

/// Case 4 with integral `l_1 = 1` and `l_1 + l_2 = 2`, for blow-ups.
pub const G6: Fixture = Fixture {
    name: "G6",
    p: "z^4",
    q: "z^3*w^2 + z^4*w + z^6",
    summary: "Case 4, integral l_1 = 1",
};

pub const ALL: [Fixture; 6] = [G1, G2, G3, G4, G5, G6];
