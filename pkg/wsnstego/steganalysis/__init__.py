# Copyright (c) 2020 The wsnstego developers
# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at http://mozilla.org/MPL/2.0/.

from .features import (
    COVER,
    STEGO,
    FEATURE_NAMES,
    N_FEATURES,
    FeatureVector,
    extract_features,
    feature_matrix,
    write_features_csv,
    read_features_csv,
)
from .fld import (
    DegenerateDataError,
    fld_train,
    fld_decision,
    fld_classify,
)
from .ensemble import (
    BaseLearner,
    EnsembleModel,
    train_ensemble,
    out_of_bag_error,
    oob_error,
    oob_curve,
    default_d_sub,
)
from .roc import (
    RocCurve,
    roc_curve,
    trapezoid_auc,
    write_roc_csv,
)
from .classic import (
    close_color_pairs_stat,
    close_pairs_score,
    rqp_test,
    rqp_score,
    lsb_enhance,
    lsb_plane_entropy,
)
