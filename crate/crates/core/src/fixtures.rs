//! The worked example graphs, shipped as `.lg` files under `fixtures/`.

use crate::graph::{parse_lg, LabeledGraph};

pub const EV2: &str = include_str!("../../../fixtures/ev2.lg");
pub const EV3: &str = include_str!("../../../fixtures/ev3.lg");
pub const EV4: &str = include_str!("../../../fixtures/ev4.lg");
pub const NR3: &str = include_str!("../../../fixtures/nr3.lg");
pub const NR3_KRIEGER: &str = include_str!("../../../fixtures/nr3-krieger.lg");
pub const MX5: &str = include_str!("../../../fixtures/mx5.lg");
pub const MX5_FOLLOWER: &str = include_str!("../../../fixtures/mx5-follower.lg");
pub const EX1: &str = include_str!("../../../fixtures/ex1.lg");
pub const EX2: &str = include_str!("../../../fixtures/ex2.lg");

/// Every fixture with its file stem.
pub const ALL: [(&str, &str); 9] = [
    ("ev2", EV2),
    ("ev3", EV3),
    ("ev4", EV4),
    ("nr3", NR3),
    ("nr3-krieger", NR3_KRIEGER),
    ("mx5", MX5),
    ("mx5-follower", MX5_FOLLOWER),
    ("ex1", EX1),
    ("ex2", EX2),
];

fn load(text: &str) -> LabeledGraph {
    parse_lg(text).expect("fixture parses")
}

pub fn ev2() -> LabeledGraph {
    load(EV2)
}
pub fn ev3() -> LabeledGraph {
    load(EV3)
}
pub fn ev4() -> LabeledGraph {
    load(EV4)
}
pub fn nr3() -> LabeledGraph {
    load(NR3)
}
pub fn nr3_krieger() -> LabeledGraph {
    load(NR3_KRIEGER)
}
pub fn mx5() -> LabeledGraph {
    load(MX5)
}
pub fn mx5_follower() -> LabeledGraph {
    load(MX5_FOLLOWER)
}
pub fn ex1() -> LabeledGraph {
    load(EX1)
}
pub fn ex2() -> LabeledGraph {
    load(EX2)
}

pub fn all() -> Vec<(&'static str, LabeledGraph)> {
    ALL.iter().map(|(n, t)| (*n, load(t))).collect()
}
