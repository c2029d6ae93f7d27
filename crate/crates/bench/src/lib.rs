//! Shapes shared by the benchmarks.

use mseuler::MultisetShape;

/// A spread of shapes with size `d`: one letter, all distinct, and balanced.
pub fn sample_shapes(d: u32) -> Vec<MultisetShape> {
    let half = d / 2;
    vec![
        MultisetShape::new(vec![d]),
        MultisetShape::ones(d as usize),
        MultisetShape::new(vec![half, d - half]),
    ]
}
