"""
覆盖概率积分计算工具
计算 I = ∫_0^∞ exp{−(Ax + Bx^{α/2})} dx 及覆盖概率 p_c = πλI，
比较闭式解、四种近似方法与高精度数值积分，并输出误差表
"""

# 标准库导入
import argparse
import asyncio
import logging
import math
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, TextIO, Tuple

# 第三方库导入
import pydantic

# 本地模块导入
from templates import render_report
from utils.approximations import (
    evaluate, interference_validity, noise_validity, ratio_test_interference, ratio_test_noise,
)
from utils.coverage_model import (
    coverage_probability, db_to_linear, derive, sigma2_to_snr_db, snr_db_to_sigma2,
)
from utils.exception_handlers import CoverageMathError, DomainError, safe_calculation
from utils.file_utils import load_json_file, render_csv, save_csv_file
from utils.models import (
    ApproxMethod, CoverageConfig, IntegralParams, NetworkParams, SweepConfig,
)
from utils.quadrature import integrate_coverage
from utils.validators import ValidationError, Validators

# ========== 全局常量定义 ==========
# 从集中管理的常量模块导入
from utils.constants import (
    EXIT_ARGUMENT_ERROR, EXIT_IO_ERROR, EXIT_MATH_ERROR, EXIT_OK, EXIT_UNEXPECTED_ERROR,
)

SCHEMA_PATH = Path(__file__).parent / "_conf_schema.json"
LOG_FORMAT = "%(asctime)s [%(levelname)s] %(name)s: %(message)s"
RATIO_HEAD = 10
RATIO_TAIL = 5
MAX_ERROR_METHODS = ("limiting", "laplace")


class CoverageCli:
    """覆盖概率命令行工具

    子命令:
        - eval: 单点求值，输出各方法的近似值、余项上界与相对参考积分的误差
        - sweep: SNR 扫描，输出 p_c 与各方法误差的 CSV 表
        - max-error: 对多个 α 做扫描，输出极限近似与拉普拉斯近似的最大误差表
        - validity: 干扰受限与噪声受限级数的 σ² 有效阈值
        - convergence: 两个级数的比值判别诊断

    参数 (A, B, α) 可以直接给出，也可以由网络参数 (λ, T, μ, σ², α) 导出。
    未给出的网络参数取 _conf_schema.json 中的默认值。

    Attributes:
        config (CoverageConfig): 默认配置
        out (TextIO): 报告输出流
        err (TextIO): 错误信息输出流
        logger: 日志记录器

    Example:
        >>> cli = CoverageCli()
        >>> exit_code = asyncio.run(cli.run(["eval", "--A", "1", "--B", "1", "--alpha", "2", "--method", "exact"]))
    """

    def __init__(self, config: Optional[CoverageConfig] = None,
                 out: Optional[TextIO] = None, err: Optional[TextIO] = None):
        self.logger = logging.getLogger(__name__)
        self.config = config
        self.out = out if out is not None else sys.stdout
        self.err = err if err is not None else sys.stderr

    async def _load_config(self) -> CoverageConfig:
        """加载默认配置

        配置文件缺失或格式错误时记录警告并使用内置默认值。
        """
        if self.config is not None:
            return self.config
        try:
            schema = await load_json_file(str(SCHEMA_PATH))
            self.config = CoverageConfig.from_dict(schema)
        except (FileNotFoundError, ValueError, OSError) as e:
            self.logger.warning(f"读取配置模式失败，使用内置默认值: {e}")
            self.config = CoverageConfig()
        return self.config

    def _setup_logging(self, verbose: bool):
        level = logging.DEBUG if verbose or self.config.detailed_logging_enabled else logging.INFO
        logging.basicConfig(level=level, format=LOG_FORMAT, stream=sys.stderr)

    # ========== 参数解析 ==========

    def build_parser(self) -> argparse.ArgumentParser:
        """构建命令行解析器"""
        common = argparse.ArgumentParser(add_help=False)
        common.add_argument("--A", dest="A", type=float, help="干扰项系数 A = πλβ")
        common.add_argument("--B", dest="B", type=float, help="噪声项系数 B = μTσ²")
        common.add_argument("--alpha", type=float, help="路损指数 α ∈ [1.6, 6.5]")
        common.add_argument("--lambda", dest="lam", type=float, help="基站密度 λ（m⁻²）")
        common.add_argument("--T-db", dest="T_db", type=float, help="SINR 门限（dB）")
        common.add_argument("--mu", type=float, help="发射功率的倒数 μ")
        common.add_argument("--sigma2", type=float, help="噪声方差 σ²")
        common.add_argument("--beta", type=float, help="直接给定 β（α = 2 时必需）")
        common.add_argument("--terms", type=int, help="级数项数 n")
        common.add_argument("--epsilon", type=float, help="有效区域误差容限 ε")
        common.add_argument("--x-hat", dest="x_hat", type=float, help="拉普拉斯展开点 x̂")
        common.add_argument("--tol", type=float, help="参考积分绝对容差")
        common.add_argument("--verbose", action="store_true", help="输出 DEBUG 日志")

        sweep_options = argparse.ArgumentParser(add_help=False)
        sweep_options.add_argument("--snr-start", dest="snr_start", type=float, help="起始 SNR（dB）")
        sweep_options.add_argument("--snr-stop", dest="snr_stop", type=float, help="终止 SNR（dB）")
        sweep_options.add_argument("--snr-step", dest="snr_step", type=float, help="SNR 步长（dB）")
        sweep_options.add_argument("--out", help="CSV 输出路径，缺省输出到标准输出")

        parser = argparse.ArgumentParser(prog="coverage", description="覆盖概率积分的闭式解、近似与误差分析")
        subparsers = parser.add_subparsers(dest="command", required=True)

        eval_parser = subparsers.add_parser("eval", parents=[common], help="单点求值")
        eval_parser.add_argument("--method", default="all",
                                 help="exact / limiting / interference / noise / laplace / all")

        sweep_parser = subparsers.add_parser("sweep", parents=[common, sweep_options], help="SNR 扫描")
        sweep_parser.add_argument("--methods", help="逗号分隔的方法列表")

        max_error_parser = subparsers.add_parser("max-error", parents=[common, sweep_options],
                                                 help="不同 α 下的最大误差")
        max_error_parser.add_argument("--alphas", help="逗号分隔的 α 列表")

        subparsers.add_parser("validity", parents=[common], help="有效区域阈值")

        convergence_parser = subparsers.add_parser("convergence", parents=[common], help="比值判别诊断")
        convergence_parser.add_argument("--ratio-terms", dest="ratio_terms", type=int, help="比值项数 K")
        return parser

    async def run(self, argv: Sequence[str]) -> int:
        """解析参数并执行子命令

        Args:
            argv (Sequence[str]): 命令行参数（不含程序名）

        Returns:
            int: 退出码（0 成功，2 参数错误，3 数学错误，4 文件错误）
        """
        try:
            args = self.build_parser().parse_args(list(argv))
        except SystemExit as e:
            return EXIT_OK if e.code in (0, None) else EXIT_ARGUMENT_ERROR

        await self._load_config()
        self._setup_logging(args.verbose)
        handlers = {
            "eval": self.cmd_eval,
            "sweep": self.cmd_sweep,
            "max-error": self.cmd_max_error,
            "validity": self.cmd_validity,
            "convergence": self.cmd_convergence,
        }
        try:
            return await handlers[args.command](args)
        except Exception as e:
            return self._handle_command_exception(args.command, e)

    def _handle_command_exception(self, operation_name: str, exception: Exception) -> int:
        """把异常映射为退出码，并向错误输出流写入原因

        Args:
            operation_name: 子命令名称，用于日志记录
            exception: 异常对象

        Returns:
            int: 退出码
        """
        if isinstance(exception, (ValidationError, pydantic.ValidationError)):
            self.logger.error(f"{operation_name} 失败(参数错误): {exception}")
            code = EXIT_ARGUMENT_ERROR
        elif isinstance(exception, CoverageMathError):
            self.logger.error(f"{operation_name} 失败(数学错误 {type(exception).__name__}): {exception}")
            code = EXIT_MATH_ERROR
        elif isinstance(exception, OSError):
            self.logger.error(f"{operation_name} 失败(文件操作错误): {exception}")
            code = EXIT_IO_ERROR
        else:
            self.logger.error(f"{operation_name} 失败(未预期的错误类型 {type(exception).__name__}): {exception}",
                              exc_info=True)
            code = EXIT_UNEXPECTED_ERROR
        print(f"错误: {exception}", file=self.err)
        return code

    # ========== 参数解析辅助 ==========

    def _pick(self, value: Any, default: Any) -> Any:
        return default if value is None else value

    @staticmethod
    def _alpha(value: Optional[float]) -> float:
        """命令行给出的 α，缺失或超出范围按参数错误处理"""
        if value is None:
            raise ValidationError("缺少 --alpha")
        try:
            return Validators.validate_alpha(value)
        except DomainError as e:
            raise ValidationError(str(e))

    def _network_params(self, args: argparse.Namespace, sigma2: float = 0.0) -> NetworkParams:
        return NetworkParams(
            lam=self._pick(args.lam, self.config.lam),
            T=db_to_linear(self._pick(args.T_db, self.config.T_db)),
            mu=self._pick(args.mu, self.config.mu),
            sigma2=sigma2,
            alpha=self._alpha(args.alpha),
        )

    def _resolve_integral(self, args: argparse.Namespace) -> Tuple[IntegralParams, Optional[float], Optional[float]]:
        """从 (A, B, α) 或网络参数得到被积函数参数

        Returns:
            Tuple[IntegralParams, Optional[float], Optional[float]]: (参数, β, λ)，
            直接给出 (A, B) 时 β 为 None，λ 仅在显式给出时返回
        """
        if args.A is not None or args.B is not None:
            if args.A is None or args.B is None or args.alpha is None:
                raise ValidationError("直接给出参数时需要同时提供 --A、--B 与 --alpha")
            return IntegralParams(A=args.A, B=args.B, alpha=self._alpha(args.alpha)), None, args.lam
        if args.sigma2 is None:
            raise ValidationError("需要提供 --A/--B/--alpha，或 --sigma2 与 --alpha（网络参数可取默认值）")
        net = self._network_params(args, args.sigma2)
        derived = derive(net, args.beta, self.config.beta_tol)
        return IntegralParams(A=derived.A, B=derived.B, alpha=net.alpha), derived.beta, net.lam

    # ========== eval ==========

    async def cmd_eval(self, args: argparse.Namespace) -> int:
        """单点求值并打印报告"""
        params, beta, lam = await asyncio.to_thread(self._resolve_integral, args)
        tol = self._pick(args.tol, self.config.tol)
        n = self._pick(args.terms, self.config.n_terms)
        oracle = await asyncio.to_thread(integrate_coverage, params, tol)

        if args.method == "all":
            methods = list(ApproxMethod)
        else:
            try:
                methods = [ApproxMethod.from_name(args.method)]
            except ValueError as e:
                raise ValidationError(str(e))

        rows = []
        for method in methods:
            row: Dict[str, Any] = {
                "method": method.value, "value": None, "error_bound": None, "abs_error": None,
                "terms_used": None, "requested_terms": None, "pc": None, "error": None,
            }
            try:
                result = evaluate(params, method, n=n, x_hat_override=args.x_hat)
            except CoverageMathError as e:
                if len(methods) == 1:
                    raise
                row["error"] = str(e)
                rows.append(row)
                continue
            row.update(
                value=result.value,
                error_bound=result.error_bound,
                abs_error=abs(result.value - oracle.value),
                terms_used=result.terms_used,
                requested_terms=result.requested_terms,
                pc=math.pi * lam * result.value if lam is not None else None,
            )
            rows.append(row)

        report = render_report("eval", {
            "A": params.A, "B": params.B, "alpha": params.alpha, "beta": beta,
            "oracle": oracle,
            "pc_oracle": coverage_probability(oracle.value, lam) if lam is not None else None,
            "rows": rows,
        })
        self.out.write(report)
        return EXIT_OK

    # ========== sweep ==========

    def _sweep_config(self, args: argparse.Namespace, alpha: float,
                      methods: Optional[Sequence[str]] = None) -> SweepConfig:
        if methods is None:
            text = getattr(args, "methods", None)
            methods = Validators.parse_methods(text) if text is not None else self.config.methods
        return SweepConfig(
            alpha=alpha,
            lam=self._pick(args.lam, self.config.lam),
            T_db=self._pick(args.T_db, self.config.T_db),
            mu=self._pick(args.mu, self.config.mu),
            snr_db_start=self._pick(args.snr_start, self.config.snr_db_start),
            snr_db_stop=self._pick(args.snr_stop, self.config.snr_db_stop),
            snr_db_step=self._pick(args.snr_step, self.config.snr_db_step),
            n_terms=self._pick(args.terms, self.config.n_terms),
            epsilon=self._pick(args.epsilon, self.config.epsilon),
            methods=tuple(methods),
            output_path=args.out,
            tol=self._pick(args.tol, self.config.tol),
            x_hat=args.x_hat,
            beta=args.beta,
        )

    @staticmethod
    @safe_calculation()
    def _method_coverage(params: IntegralParams, method: str, sweep: SweepConfig) -> float:
        """单个方法在单个网格点上的 p_c，该方法不适用时为 nan"""
        result = evaluate(params, ApproxMethod.from_name(method), n=sweep.n_terms, x_hat_override=sweep.x_hat)
        return math.pi * sweep.lam * result.value

    def _sweep_row(self, sweep: SweepConfig, beta: float, snr_db: float) -> List[float]:
        sigma2 = snr_db_to_sigma2(snr_db)
        A = math.pi * sweep.lam * beta
        B = sweep.mu * sweep.T * sigma2
        params = IntegralParams(A=A, B=B, alpha=sweep.alpha)
        pc_oracle = coverage_probability(integrate_coverage(params, sweep.tol).value, sweep.lam)
        pcs = [self._method_coverage(params, method, sweep) for method in sweep.methods]
        errors = [abs(pc - pc_oracle) for pc in pcs]
        return [snr_db, sigma2, A, B, pc_oracle, *pcs, *errors]

    async def run_sweep(self, sweep: SweepConfig) -> Tuple[List[str], List[List[float]]]:
        """计算扫描表

        各网格点在线程池中并行计算，结果按网格顺序排列。

        Returns:
            Tuple[List[str], List[List[float]]]: (表头, 数据行)
        """
        net = NetworkParams(lam=sweep.lam, T=sweep.T, mu=sweep.mu, sigma2=0.0, alpha=sweep.alpha)
        derived = await asyncio.to_thread(derive, net, sweep.beta, self.config.beta_tol)
        grid = sweep.snr_grid()
        self.logger.info(f"开始扫描: α={sweep.alpha}, β={derived.beta:.10g}, {len(grid)} 个网格点")
        for solver in (interference_validity, noise_validity):
            report = solver(sweep.epsilon, sweep.n_terms, net, derived.beta)
            self.logger.info(
                f"[{report.regime}] 有效区域 ε={report.epsilon:g}, n={report.n}: "
                f"σ² 阈值 {report.sigma2_threshold:.6g} (SNR {self._snr_db(report.sigma2_threshold):.2f} dB)"
            )

        rows = await asyncio.gather(*(
            asyncio.to_thread(self._sweep_row, sweep, derived.beta, snr_db) for snr_db in grid
        ))
        header = ["snr_db", "sigma2", "A", "B", "pc_oracle"]
        header += [f"pc_{method}" for method in sweep.methods]
        header += [f"err_{method}" for method in sweep.methods]
        return header, list(rows)

    async def _emit_csv(self, path: Optional[str], header: Sequence[str], rows: Sequence[Sequence[Any]]):
        if path is None:
            self.out.write(render_csv(header, rows))
            return
        await save_csv_file(path, header, rows)
        self.logger.info(f"已写入 {len(rows)} 行: {path}")

    async def cmd_sweep(self, args: argparse.Namespace) -> int:
        """SNR 扫描，输出 CSV"""
        sweep = self._sweep_config(args, self._alpha(args.alpha))
        header, rows = await self.run_sweep(sweep)
        await self._emit_csv(sweep.output_path, header, rows)
        return EXIT_OK

    # ========== max-error ==========

    @staticmethod
    def _column_max(values: Sequence[float]) -> float:
        finite = [value for value in values if not math.isnan(value)]
        return max(finite) if finite else math.nan

    async def cmd_max_error(self, args: argparse.Namespace) -> int:
        """对每个 α 做扫描，输出极限近似与拉普拉斯近似的最大绝对误差"""
        alphas = Validators.parse_float_list(args.alphas, "α 列表") if args.alphas else self.config.alphas
        alphas = [self._alpha(alpha) for alpha in alphas]
        output_path = args.out
        rows = []
        for alpha in alphas:
            sweep = self._sweep_config(args, alpha, MAX_ERROR_METHODS)
            header, sweep_rows = await self.run_sweep(sweep)
            maxima = []
            for method in MAX_ERROR_METHODS:
                column = header.index(f"err_{method}")
                maxima.append(self._column_max([row[column] for row in sweep_rows]))
            rows.append([alpha, *maxima])
        await self._emit_csv(output_path, ["alpha", *[f"max_err_{m}" for m in MAX_ERROR_METHODS]], rows)
        return EXIT_OK

    # ========== validity ==========

    @staticmethod
    def _snr_db(sigma2: float) -> float:
        if math.isinf(sigma2):
            return -math.inf
        return sigma2_to_snr_db(sigma2)

    async def cmd_validity(self, args: argparse.Namespace) -> int:
        """打印两个级数的 σ² 有效阈值"""
        net = self._network_params(args)
        derived = await asyncio.to_thread(derive, net, args.beta, self.config.beta_tol)
        epsilon = self._pick(args.epsilon, self.config.epsilon)
        n = self._pick(args.terms, self.config.n_terms)

        reports = []
        for solver in (interference_validity, noise_validity):
            report = solver(epsilon, n, net, derived.beta)
            reports.append({
                "regime": report.regime,
                "B_threshold": report.B_threshold,
                "sigma2_threshold": report.sigma2_threshold,
                "sigma2_asymptotic": report.sigma2_asymptotic,
                "snr_threshold": self._snr_db(report.sigma2_threshold),
                "snr_asymptotic": self._snr_db(report.sigma2_asymptotic),
            })
        self.out.write(render_report("validity", {
            "epsilon": epsilon, "n": n, "alpha": net.alpha, "beta": derived.beta, "reports": reports,
        }))
        return EXIT_OK

    # ========== convergence ==========

    async def cmd_convergence(self, args: argparse.Namespace) -> int:
        """打印两个级数的比值判别结果"""
        params, _, _ = await asyncio.to_thread(self._resolve_integral, args)
        K = self._pick(args.ratio_terms, self.config.ratio_terms)
        reports = []
        for test in (ratio_test_interference, ratio_test_noise):
            report = test(params, K)
            reports.append({
                "series": report.series,
                "verdict": report.verdict,
                "limit_expression": report.limit_expression,
                "head": report.ratios[:RATIO_HEAD],
                "tail": report.ratios[-RATIO_TAIL:],
                "optimal_truncation": report.optimal_truncation,
            })
        self.out.write(render_report("convergence", {
            "A": params.A, "B": params.B, "alpha": params.alpha, "K": K, "reports": reports,
        }))
        return EXIT_OK


def main():
    """命令行入口"""
    sys.exit(asyncio.run(CoverageCli().run(sys.argv[1:])))


if __name__ == "__main__":
    main()
