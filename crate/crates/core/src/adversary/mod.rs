//! Interval partitions, predictors and the adversary construction against a
//! continuous map, with the predicted families `S_{n,r}` built from it.

mod construct;
mod family;
mod machine;

pub use construct::{
    build_adversary, build_adversary_with, verify_certificate, AdversaryCertificate, AdversaryOutcome, DecidedFact,
    Frontier, IntervalPartition, Predictor, MAX_HISTORY_BITS,
};
pub use family::{
    free_positions, image_nonsplit_certificate, multiclass_family, predicted_family_element, predicts, predicts_set,
    splitter_from_free_class, ClassReport, FamilyReport, ImageFact, SplitTrace,
};
pub use machine::{
    bits_to_string, parse_bits, Answer, ConstantMachine, ContinuousMachine, DenseOpen, FnContinuous, IdentityMachine,
    ProcessContinuous,
};
