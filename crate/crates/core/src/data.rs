//! Bundled inputs: the genus-2 and genus-3 example curves with their choices
//! files, and the two generators of the mod-8 group for `g = 3`.

use crate::criteria::AnniChoices;
use crate::curve::CurveSpec;
use crate::matgrp::GeneratorFile;

pub const C2_JSON: &str = include_str!("../data/c2.json");
pub const C2_CHOICES_JSON: &str = include_str!("../data/c2-choices.json");
pub const C3_JSON: &str = include_str!("../data/c3.json");
pub const C3_CHOICES_JSON: &str = include_str!("../data/c3-choices.json");
pub const MOD8_GENERATORS_JSON: &str = include_str!("../data/mod8-generators.json");

pub fn c2() -> CurveSpec {
    CurveSpec::from_json(C2_JSON).expect("bundled curve parses")
}

pub fn c3() -> CurveSpec {
    CurveSpec::from_json(C3_JSON).expect("bundled curve parses")
}

pub fn c2_choices() -> AnniChoices {
    AnniChoices::from_json(C2_CHOICES_JSON).expect("bundled choices parse")
}

pub fn c3_choices() -> AnniChoices {
    AnniChoices::from_json(C3_CHOICES_JSON).expect("bundled choices parse")
}

pub fn mod8_generators() -> GeneratorFile {
    GeneratorFile::from_json(MOD8_GENERATORS_JSON).expect("bundled generators parse")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_inputs_load() {
        assert_eq!(c2().genus, 2);
        assert_eq!(c3().genus, 3);
        assert_eq!(c2_choices().q, [3, 3, 5]);
        assert_eq!(c3_choices().p3, 19);
        let gens = mod8_generators();
        assert_eq!(
            (gens.modulus, gens.dimension, gens.generators.len()),
            (8, 6, 2)
        );
    }
}
