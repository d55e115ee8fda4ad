use super::group::parse_elements;
use super::{tensor_groups, OperatorGroup, PauliError};

/// Every name accepted by [`named_group`].
pub const GROUP_NAMES: [&str; 23] = [
    "G1", "G2", "G3", "G2^1(8)", "G2^2(8)", "G2^3(8)", "G2^4(8)", "G2^5(8)", "G2^6(8)",
    "G2^7(8)", "G2^8(8)", "G2^9(8)", "G2^10(8)", "G2^11(8)", "G3^1(32)", "G3^2(32)",
    "G3^3(32)", "G3^4(32)", "G3^5(32)", "G3^6(32)", "G3^7(32)", "G3^8(32)", "G3^9(32)",
];

fn list(s: &str) -> OperatorGroup {
    OperatorGroup::new(None, parse_elements(s).expect("catalog strings parse"))
        .expect("catalog lists are groups")
}

fn g1() -> OperatorGroup {
    list("I X Y Z")
}

fn pair(letter: &str) -> OperatorGroup {
    list(&format!("I {letter}"))
}

fn product(factors: &[OperatorGroup]) -> OperatorGroup {
    let (first, rest) = factors.split_first().expect("at least one factor");
    rest.iter().fold(first.clone(), |acc, f| tensor_groups(&acc, f))
}

/// `G1 ⊗ {I, P}` listed with the second factor varying slowest.
fn g1_otimes_pair(p: &str) -> OperatorGroup {
    list(&format!("II XI YI ZI I{p} X{p} Y{p} Z{p}"))
}

/// Looks up a catalog group by its conventional name. The element order is
/// the defining listing of that group.
pub fn named_group(name: &str) -> Result<OperatorGroup, PauliError> {
    let group = match name {
        "G1" => g1(),
        "G2" => product(&[g1(), g1()]),
        "G3" => product(&[g1(), g1(), g1()]),
        "G2^1(8)" => g1_otimes_pair("X"),
        "G2^2(8)" => g1_otimes_pair("Y"),
        "G2^3(8)" => g1_otimes_pair("Z"),
        "G2^4(8)" => product(&[pair("X"), g1()]),
        "G2^5(8)" => product(&[pair("Y"), g1()]),
        "G2^6(8)" => product(&[pair("Z"), g1()]),
        "G2^7(8)" => list("II IZ ZI ZZ XX YX XY YY"),
        "G2^8(8)" => list("II ZZ XY YX IX ZY YI XZ"),
        "G2^9(8)" => list("II ZZ XY YX XI YZ ZX IY"),
        "G2^10(8)" => list("II XI IX XX ZZ YZ ZY YY"),
        "G2^11(8)" => list("II YI IY YY ZZ ZX XZ XX"),
        "G3^1(32)" => product(&[g1(), g1(), pair("X")]),
        "G3^2(32)" => product(&[g1(), g1(), pair("Y")]),
        "G3^3(32)" => product(&[g1(), g1(), pair("Z")]),
        "G3^4(32)" => product(&[pair("X"), g1(), g1()]),
        "G3^5(32)" => product(&[pair("Y"), g1(), g1()]),
        "G3^6(32)" => product(&[pair("Z"), g1(), g1()]),
        "G3^7(32)" => product(&[g1(), pair("X"), g1()]),
        "G3^8(32)" => product(&[g1(), pair("Y"), g1()]),
        "G3^9(32)" => product(&[g1(), pair("Z"), g1()]),
        other => return Err(PauliError::UnknownGroup(other.to_string())),
    };
    Ok(group.with_name(name))
}
