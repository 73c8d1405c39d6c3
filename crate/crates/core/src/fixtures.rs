//! Built-in exact matrices used by the CLI and the test suites.

use crate::numfield::{ExactC, Mat};

pub struct Fixture {
    pub name: &'static str,
    pub provenance: &'static str,
    rows: &'static [&'static [i64]],
}

impl Fixture {
    pub fn matrix(&self) -> Mat<ExactC> {
        Mat::from_i64(self.rows)
    }
}

pub const FIXTURES: &[Fixture] = &[
    Fixture {
        name: "ex3_4",
        provenance: "2x2 nilpotent Jordan block, index 2; the <1,m>-core inverse does not exist",
        rows: &[&[0, 1], &[0, 0]],
    },
    Fixture {
        name: "ex4_5",
        provenance: "3x3 upper shift, index 3; the (3,1)-core inverse is zero",
        rows: &[&[0, 1, 0], &[0, 0, 1], &[0, 0, 0]],
    },
    Fixture {
        name: "ex4_6",
        provenance: "3x3 rank-2 matrix of index 2 with A^3 = A^2; the (2,1)-core system is inconsistent",
        rows: &[&[2, 2, 1], &[-1, -1, 0], &[0, 0, 0]],
    },
    Fixture {
        name: "ex4_6_sq",
        provenance: "square of ex4_6, idempotent; its pseudoinverse has denominator 15",
        rows: &[&[2, 2, 2], &[-1, -1, -1], &[0, 0, 0]],
    },
];

pub fn get(name: &str) -> Option<&'static Fixture> {
    FIXTURES.iter().find(|f| f.name == name)
}
