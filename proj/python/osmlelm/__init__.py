"""Online sequential multi-label extreme learning machine."""

from ._core import (
    Activation,
    ConfigError,
    DataError,
    DimensionError,
    Error,
    Fold,
    HiddenLayer,
    LabeledDataset,
    MetricsReport,
    ModelFile,
    Normalizer,
    NumericalError,
    OselmModel,
    ThresholdCalibration,
    calibrate_threshold,
    decode,
    evaluate,
    example_accuracy,
    example_prf,
    fit_normalizer,
    apply_normalizer,
    hamming_loss,
    hidden_output,
    init_hidden,
    init_phase,
    kfold,
    label_cardinality,
    label_density,
    load_csv,
    load_model,
    load_sparse,
    matmul,
    pinv_normal,
    predict_raw,
    save_model,
    solve_spd,
    to_bipolar,
    transpose,
    update,
)

__all__ = [name for name in dir() if not name.startswith("_")]
