"""
常量定义模块

集中管理覆盖概率积分计算中使用的所有常量，避免重复定义。
"""

import math

# ========== 路损指数范围 ==========
ALPHA_MIN = 1.6  # 路损指数下限（室内单层办公楼）
ALPHA_MAX = 6.5  # 路损指数上限（城区室外）

# ========== 特殊函数常量 ==========
MACHINE_EPS = 2.220446049250313e-16
GAMMA_OVERFLOW_THRESHOLD = 171.6243769563027  # Γ(x) 超过此值即溢出 double
EXP_OVERFLOW_LOG = 709.782712893384  # exp(x) 的最大可表示参数
SQRT_PI = 1.7724538509055160273
SQRT_TWO = 1.4142135623730950488
LOG_SQRT_TWO_PI = 0.91893853320467274178

# Lanczos 近似系数（g = 7, n = 9），有效位数约 15 位
LANCZOS_G = 7.0
LANCZOS_COEFFICIENTS = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)

SERIES_EPS = 4 * MACHINE_EPS  # 级数/连分式的相对收敛阈值
SERIES_MAX_ITER = 10000  # 级数/连分式最大迭代次数
CF_FPMIN = 1e-300  # Lentz 算法中防止除零的最小值
ERFC_SERIES_CUTOFF = 2.5  # erfc 在此以下用正项级数，以上用连分式
NEGATIVE_A_CF_CUTOFF = 1.5  # 负参数不完全伽马在 z 大于此值时直接用连分式

# ========== 数值积分常量 ==========
QUAD_DEFAULT_TOL = 1e-10  # 默认绝对容差
QUAD_MIN_TOL = 1e-13  # 允许的最小容差
QUAD_MAX_INTERVALS = 4000  # 自适应细分的最大子区间数
QUAD_INITIAL_PANELS = 8  # 初始均匀划分数
QUAD_TRUNCATION_FACTOR = 1e-3  # 截断点处被积函数 < tol * 此因子
QUAD_RELATIVE_FLOOR = 64 * MACHINE_EPS  # 相对精度下限

# Gauss-Kronrod 15 点节点与权重（QUADPACK qk15）
GK15_NODES = (
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
)
GK15_WEIGHTS = (
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
)
G7_WEIGHTS = (
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
)

# ========== 网络模型常量 ==========
DEFAULT_CELL_RADIUS = 500.0  # 米，λ = 1/(π·500²)
DEFAULT_LAMBDA = 1.0 / (math.pi * DEFAULT_CELL_RADIUS ** 2)
DEFAULT_T_DB = 0.0
DEFAULT_MU = 1.0
BETA_TOL = 1e-10  # β 期望积分默认容差
BETA_CACHE_MAXSIZE = 256  # β 缓存最大条目数
COVERAGE_RANGE_SLACK = 1e-6  # p_c 允许超过 1 的余量

# ========== 近似方法常量 ==========
DEFAULT_TERMS = 4  # 级数默认项数
N_MAX = 30  # 级数允许的最大项数
DEFAULT_EPSILON = 1e-3
DEFAULT_RATIO_TERMS = 50

# ========== 扫描与输出 ==========
DEFAULT_SNR_START = -20.0
DEFAULT_SNR_STOP = 140.0
DEFAULT_SNR_STEP = 1.0
DEFAULT_ALPHAS = (2.5, 3.0, 3.5, 4.0, 4.5, 5.0)
CSV_SIGNIFICANT_DIGITS = 12
SWEEP_METHODS = ('limiting', 'interference', 'noise', 'laplace')

# ========== 退出码 ==========
EXIT_OK = 0
EXIT_UNEXPECTED_ERROR = 1
EXIT_ARGUMENT_ERROR = 2
EXIT_MATH_ERROR = 3
EXIT_IO_ERROR = 4
