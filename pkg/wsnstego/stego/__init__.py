# Copyright (c) 2020 The wsnstego developers
# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at http://mozilla.org/MPL/2.0/.

from .base import (
    StegoError,
    CapacityExceeded,
    Unsolvable,
    StegoKey,
    EmbedReport,
    AttackMapEntry,
    f5_lsb,
    random_message,
    attack_map,
)
from .hamming import (
    HammingCode,
    hamming_code,
    hamming_embed,
)
from .f5 import (
    f5_embed,
    f5_extract,
    choose_f5_p,
    expected_capacity,
)
from .wetpaper import (
    WetPaperSystem,
    wet_paper_solve,
    min_weight_solve,
    random_columns,
    gf2_solve,
    gf2_matvec,
)
from .nsf5 import (
    BlockPlan,
    block_plan,
    dry_count,
    nsf5_embed,
    nsf5_extract,
)
from .lsb import (
    lsb_replace_embed,
    lsb_replace_extract,
    lsb_report,
)
