mod common;

const CASES: u32 = 1000;

#[test]
fn d_squared_vanishes() {
    common::d_squared(CASES).unwrap();
}

#[test]
fn leibniz_rule() {
    common::leibniz(CASES).unwrap();
}

#[test]
fn hodge_star_involution_and_pairing() {
    common::hodge(CASES).unwrap();
}

#[test]
fn hitchin_k_squares_to_lambda() {
    common::hitchin_square(CASES).unwrap();
}

#[test]
fn lefschetz_inverse_round_trip() {
    common::lefschetz_round_trip(CASES).unwrap();
}

#[test]
fn reduce_after_lift_is_identity() {
    common::reduce_lift(CASES).unwrap();
}
