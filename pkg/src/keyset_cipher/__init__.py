"""Key sets for Blom's scheme via circulant transforms R with R R^T = w I over Z_p."""

from .blom import (
    PublicIdVector,
    SecretKeyVector,
    TaBundle,
    key_scale,
    shared_key,
    ta_generate,
    ta_load,
    user_id,
    user_secret,
)
from .keyset import KeySetEntry, UserKeySet, expand_keyset, inner_transform, outer_transform
from .modring import MatZ, Modulus, Residue, is_symmetric, mat_mul, mat_transpose, mod_inv
from .netsim import SimConfig, SimReport, Transcript, audit_transcript, run_sim
from .protocol import (
    AgreementContext,
    AlignedIndexAnnounce,
    PublishedBundle,
    aligned_agree,
    final_key,
    publish,
    randomized_agree,
    raw_key,
)
from .rfamily import (
    CirculantSpec,
    SolutionRow,
    autocorrelation,
    circulant,
    enumerate3,
    make_family,
    scalar_family,
    solve3,
    verify_orthogonal,
)

__version__ = "0.1.0"
