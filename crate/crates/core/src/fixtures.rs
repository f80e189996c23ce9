//! Worked instances and distributions used across tests, docs and the CLI.
//!
//! Example 1 and Example 4 number their jobs 2..6; here they are job indices
//! 0..4 in that order ([`EXAMPLE1_JOB_NAMES`]).

use alloc::vec;
use alloc::vec::Vec;

use crate::model::{Distribution, Instance, Ptime};
use crate::rational::{int, Rational};

pub const EXAMPLE1_JOB_NAMES: [&str; 5] = ["2", "3", "4", "5", "6"];
pub const EXAMPLE2_JOB_NAMES: [&str; 4] = ["1", "2", "3", "4"];

fn grid(m: usize, n: usize, cells: &[(usize, usize, i64)]) -> Vec<Vec<Ptime>> {
    let mut p = vec![vec![Ptime::Forbidden; n]; m];
    for &(i, j, v) in cells {
        p[i][j] = Ptime::Finite(int(v));
    }
    p
}

fn amounts(m: usize, n: usize, cells: &[(usize, usize, i64)]) -> Vec<Vec<Rational>> {
    let mut t = vec![vec![int(0); n]; m];
    for &(i, j, v) in cells {
        t[i][j] = int(v);
    }
    t
}

/// Machines 1-4 (0-3); job 2 fits machines 2-4, job 3 machines 1 and 3,
/// jobs 4, 5, 6 one machine each. `r4` is the release of job 4.
pub fn example1_with_r4(r4: i64) -> Instance {
    let p = grid(
        4,
        5,
        &[(0, 1, 15), (2, 1, 15), (1, 0, 16), (2, 0, 16), (3, 0, 16), (0, 2, 13), (1, 4, 13), (3, 3, 13)],
    );
    Instance::new(p, vec![int(2), int(3), int(r4), int(0), int(5)]).expect("example 1 is valid")
}

pub fn example1() -> Instance {
    example1_with_r4(8)
}

/// Example 1 with job 4 released at 0.
pub fn example1a() -> Instance {
    example1_with_r4(0)
}

/// Example 1 with job 4 released at 6.
pub fn example1b() -> Instance {
    example1_with_r4(6)
}

/// Distributions 1-4 of Example 1; they differ only in how job 2 is spread over
/// machines 2, 3, 4.
pub fn example1_distribution(k: usize) -> Distribution {
    let (t22, t32, t42, cmax) = match k {
        1 => (4, 8, 4, 18),
        2 => (5, 6, 5, 18),
        3 => (5, 4, 7, 20),
        4 => (5, 3, 8, 21),
        _ => panic!("example 1 has distributions 1 to 4"),
    };
    let t = amounts(
        4,
        5,
        &[(0, 1, 5), (0, 2, 13), (1, 0, t22), (1, 4, 13), (2, 0, t32), (2, 1, 10), (3, 3, 13), (3, 0, t42)],
    );
    Distribution { t, cmax: int(cmax) }
}

/// Two machines, four jobs released at 3, 5, 5, 1.
pub fn example2() -> Instance {
    let p = grid(2, 4, &[(0, 0, 9), (0, 1, 2), (0, 2, 3), (1, 1, 2), (1, 2, 3), (1, 3, 10)]);
    Instance::new(p, vec![int(3), int(5), int(5), int(1)]).expect("example 2 is valid")
}

/// The `C_max = 12` distribution of Example 2.
pub fn example2_distribution() -> Distribution {
    Distribution { t: amounts(2, 4, &[(0, 0, 9), (0, 2, 3), (1, 1, 2), (1, 3, 10)]), cmax: int(12) }
}

/// Simultaneous-release variant of Example 1 with longer jobs 2 and 3.
pub fn example4() -> Instance {
    let p = grid(
        4,
        5,
        &[(0, 1, 18), (2, 1, 18), (1, 0, 18), (2, 0, 18), (3, 0, 18), (0, 2, 13), (1, 4, 13), (3, 3, 10)],
    );
    Instance::new(p, vec![int(0); 5]).expect("example 4 is valid")
}

pub fn example4_distribution() -> Distribution {
    let t = amounts(
        4,
        5,
        &[(0, 1, 5), (0, 2, 13), (1, 0, 5), (1, 4, 13), (2, 0, 5), (2, 1, 13), (3, 0, 8), (3, 3, 10)],
    );
    Distribution { t, cmax: int(18) }
}
