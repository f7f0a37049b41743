"""
File formats: raw curves, labels, smoothed coefficients (with their basis sidecar), fitted models, predictions and
cross-validation reports. Every writer is atomic and deterministic byte for byte.

    >>> from privex.folr.persist import load_curves, load_labels, join
    >>> curves, ys = join(load_curves('curves.csv'), load_labels('labels.csv'))

"""
from privex.folr.persist.writers import (
    SIDECAR_SUFFIX, atomic_write, atomic_writes, render_csv, render_json, save_basis, save_beta, save_class_means,
    save_coefficients, save_curves, save_labels, save_predictions, save_report, save_scores, save_summary,
    summary_frame, write_csv,
)
from privex.folr.persist.loaders import (
    CoefficientLoader, CurveLoader, LabelLoader, join, load_basis, load_coefficients, load_curves, load_labels,
)
from privex.folr.persist.models import (
    FORMAT_VERSION, SUPPORTED_VERSIONS, load_model, model_from_dict, model_to_dict, parse_model, render_model,
    save_model,
)
from privex.folr.persist.specs import load_synthetic_spec, synthetic_spec_from_dict
