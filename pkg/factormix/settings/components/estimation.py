# Defaults of the command line options.
# The library keeps equal defaults in `FitConfig`; only commands read these.

from factormix.settings.components import config

FACTORMIX_QUAD_POINTS = config('FACTORMIX_QUAD_POINTS', cast=int, default=8)
FACTORMIX_EPSILON = config('FACTORMIX_EPSILON', cast=float, default=1e-5)
FACTORMIX_MAX_ITER = config('FACTORMIX_MAX_ITER', cast=int, default=500)
FACTORMIX_NEWTON_MAX = config('FACTORMIX_NEWTON_MAX', cast=int, default=5)
FACTORMIX_STARTS = config('FACTORMIX_STARTS', cast=int, default=1)
FACTORMIX_RIDGE = config('FACTORMIX_RIDGE', cast=float, default=1e-6)
FACTORMIX_SEED = config('FACTORMIX_SEED', cast=int, default=0)
FACTORMIX_THREADS = config('FACTORMIX_THREADS', cast=int, default=1)

FACTORMIX_RESIDUAL_THRESHOLD = config(
    'FACTORMIX_RESIDUAL_THRESHOLD',
    cast=float,
    default=4.0,
)
FACTORMIX_CRITERION = config('FACTORMIX_CRITERION', default='aic')
