"""Exact dense signal scanning with translation-invariant processing chains.

A processing chain (convolutions, nonlinearities, pooling) that is defined
on patches of ``B`` samples can be evaluated over a whole signal at once
without changing a single output bit; see :func:`exact_scan`.
"""

from .chain import (
    ChainLayer,
    DimReport,
    MixedPlan,
    ProcessingChain,
    build_chain,
    bypass_layer,
    chain_dims,
    eval_dilate,
    eval_mixed,
    eval_relax,
    eval_slide,
    eval_stride,
    exact_scan,
    mixed_plan,
    mixed_scan,
    receptive_field,
    relaxed_scan,
    shift_and_stitch,
    stitch_passes,
    stuffing_amount,
)
from .cnn import (
    FilterBank,
    avg_pool_kernel,
    bias_kernel,
    channel_signal,
    conv,
    conv_kernel,
    duc,
    duc_reorder,
    max_pool_kernel,
    pointwise_kernel,
    real_signal,
    transposed_conv,
    zoh_filter_bank,
)
from .complexity import (
    EvalCounts,
    SpeedupRow,
    count_eval,
    emit_report,
    measured_ratio,
    predicted_counts,
    speedup,
    speedup_limit,
    speedup_relax,
    speedup_relax_limit,
)
from .errors import (
    BadConfig,
    ChannelMismatch,
    DenseScanError,
    DivisibilityError,
    IllFormedChain,
    IndexOutOfRange,
    LengthError,
    NoZeroElement,
    OddFactor,
    ParseError,
    PreconditionError,
    ShapeError,
)
from .multiscale import (
    MultiScaleConfig,
    binomial_lowpass,
    ms_boundary,
    ms_downscale,
    ms_index,
    ms_scan,
    ms_scan_slow,
    ms_subsignal,
    padded_subsignal,
)
from .planar2d import (
    Chain2D,
    FragmentedImage,
    Image,
    Kernel2D,
    Layer2D,
    build_chain2d,
    defragment2d,
    eval_slide2d,
    eval_stride2d,
    exact_scan2d,
    fragment2d,
    patch,
    slide2d,
    stride2d,
)
from .resample import (
    BoundaryRule,
    SampleAlgebra,
    crop,
    dirichlet,
    downsample,
    neumann,
    pad,
    spread,
    stuff,
    trim,
    upsample_zoh,
)
from .signal import (
    FragmentedSignal,
    Kernel,
    Signal,
    euclid_divmod,
    identity_kernel,
    subsignal,
    unvectorize,
    vectorize,
)
from .windowed import defragment, dilate, dilated_subsignal, fragment, slide, slide_fragmented, stride

__version__ = "0.1.0"
