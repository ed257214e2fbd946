import json
import logging
import time
from pathlib import Path
from typing import Any, Dict, List, Optional, Type, TypeVar

from pydantic import BaseModel, ConfigDict, Field, ValidationError

from .abp import NcAbp, abp_from_waring
from .evaluation import eval_abp, eval_naive, eval_treewidth
from .polynomial import WaringPoint
from .scalar import encode_scalar, zero_of
from .tableau import Tableau, has_column_repeat, tableau_graph, tableau_validate
from .treedec import TreeDecomposition, build_computation_tree, minfill_decomposition
from .utils import DEFAULT_ENUMERATION_CAP, CrossCheckError, FieldKind, Method, OutputFormat, ParseError

logger = logging.getLogger(__name__)

ModelT = TypeVar("ModelT", bound=BaseModel)


class EvaluationConfig(BaseModel):
    """Runtime knobs shared by the commands."""
    model_config = ConfigDict(frozen=True)

    threads: int = Field(default=1, ge=1)
    enumeration_cap: int = Field(default=DEFAULT_ENUMERATION_CAP, ge=1)
    minimize_bags: bool = False
    seed: int = 0


class RunReport(BaseModel):
    command: str
    result: Optional[Any] = None
    field: Optional[str] = None
    method: Optional[str] = None
    stats: Dict[str, Any] = {}
    details: Dict[str, Any] = {}
    wall_time: float = 0.0
    seed: Optional[int] = None

    def render(self, output_format: OutputFormat) -> str:
        payload = self.model_dump(exclude_none=True)
        if output_format == OutputFormat.JSON:
            return json.dumps(payload)
        lines = []
        for key, value in payload.items():
            if isinstance(value, (dict, list)):
                value = json.dumps(value)
            lines.append(f"{key}: {value}")
        return "\n".join(lines)


def read_model(file_path: str, model: Type[ModelT]) -> ModelT:
    """Parse a JSON file into a model; every decoding failure becomes a ParseError."""
    try:
        content = json.loads(Path(file_path).read_text())
    except json.JSONDecodeError as e:
        raise ParseError(f"{file_path}: not valid JSON ({e})") from e
    try:
        return model.model_validate(content)
    except ValidationError as e:
        raise ParseError(f"{file_path}: {e}") from e


def read_tableau(file_path: str) -> Tableau:
    t = read_model(file_path, Tableau)
    problem = tableau_validate(t)
    if problem is not None:
        raise ParseError(f"{file_path}: {problem}")
    return t


def write_model(model: BaseModel, file_path: str) -> None:
    Path(file_path).write_text(model.model_dump_json(by_alias=True, indent=2) + "\n")


def get_decomposition(t: Tableau, decomp_path: Optional[str]) -> TreeDecomposition:
    if decomp_path:
        return read_model(decomp_path, TreeDecomposition)
    return minfill_decomposition(tableau_graph(t).simple_graph())


def run_evaluation(
    t: Tableau,
    point: Optional[WaringPoint],
    abp: Optional[NcAbp],
    method: Method,
    config: EvaluationConfig,
    decomp_path: Optional[str] = None,
    dump_ct: Optional[str] = None,
) -> RunReport:
    """Evaluate with one or all methods; 'all' raises CrossCheckError on any disagreement."""
    start = time.perf_counter()
    field = (point.field if point is not None else abp.field).value
    if has_column_repeat(t):
        return RunReport(
            command="eval", result=encode_scalar(zero_of(FieldKind(field))), field=field,
            method=Method.SHORTCUT.value, wall_time=time.perf_counter() - start, seed=config.seed,
        )
    if abp is None:
        abp = abp_from_waring(point)

    methods: List[Method]
    if method == Method.ALL:
        methods = [Method.NAIVE, Method.ABP, Method.TREEWIDTH] if point is not None else [Method.ABP, Method.TREEWIDTH]
    elif method == Method.NAIVE and point is None:
        logger.warning("naive evaluation needs a Waring point; using the ABP evaluator instead")
        methods = [Method.ABP]
    else:
        methods = [method]

    values: Dict[str, Any] = {}
    stats: Dict[str, Any] = {"abp_width": abp.width}
    for current in methods:
        logger.info("evaluating with %s", current.value)
        if current == Method.NAIVE:
            values[current.value] = eval_naive(t, point, threads=config.threads, stats=stats)
        elif current == Method.ABP:
            values[current.value] = eval_abp(t, abp, stats=stats)
        else:
            td = get_decomposition(t, decomp_path)
            ct = build_computation_tree(t, td, minimize_bags=config.minimize_bags)
            if dump_ct:
                write_model(ct, dump_ct)
            stats["decomposition_width"] = td.width
            values[current.value] = eval_treewidth(t, abp, ct, stats=stats)

    distinct = set(values.values())
    if len(distinct) > 1:
        raise CrossCheckError(
            "evaluators disagree: " + ", ".join(f"{k}={encode_scalar(v)}" for k, v in values.items())
        )
    value = next(iter(values.values()))
    return RunReport(
        command="eval",
        result=encode_scalar(value),
        field=field,
        method=method.value if method == Method.ALL else methods[0].value,
        stats=stats,
        wall_time=time.perf_counter() - start,
        seed=config.seed,
    )
