"""
Text dump of a network realization for debugging and cross-checking.
"""

from pathlib import Path
from typing import Union

import structlog

from ..common.errors import OutputError
from .realization import NetworkRealization

logger = structlog.get_logger(__name__)

DUMP_HEADER = (
    "# network realization dump\n"
    "# BS   bs x_m y_m\n"
    "# UE   ue cell ue_in_cell x_m y_m serving_bs pilot power_mw\n"
    "# LINK bs ue distance_m angle_rad shadow beta_los_db beta_nlos_db\n"
)


def _fmt(value: float) -> str:
    return f"{value:.12g}"


def dump_network(realization: NetworkRealization, path: Union[str, Path]) -> Path:
    """
    Write one whitespace-separated record per line (UTF-8), kinds BS, UE and LINK.

    Raises:
        OutputError: the file cannot be written
    """
    path = Path(path)
    config = realization.config
    lines = [DUMP_HEADER.rstrip('\n')]
    lines.append(
        f"# drop={realization.drop_id} L={config.num_cells} K={config.ues_per_cell} "
        f"tau_p={config.tau_p} rayleigh={int(realization.rayleigh)}"
    )
    for bs, (x, y) in enumerate(realization.bs_positions):
        lines.append(f"BS {bs} {_fmt(x)} {_fmt(y)}")
    for ue, (x, y) in enumerate(realization.ue_positions):
        cell, k = realization.ue_id(ue)
        lines.append(
            f"UE {ue} {cell} {k} {_fmt(x)} {_fmt(y)} {int(realization.serving[ue])} "
            f"{int(realization.pilots[ue])} {_fmt(realization.powers[ue])}"
        )
    for bs in range(config.num_cells):
        for ue in range(realization.num_ues):
            lines.append(
                f"LINK {bs} {ue} {_fmt(realization.distances[bs, ue])} "
                f"{_fmt(realization.angles[bs, ue])} {_fmt(realization.shadow[bs, ue])} "
                f"{_fmt(realization.beta_los_db[bs, ue])} {_fmt(realization.beta_nlos_db[bs, ue])}"
            )
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text("\n".join(lines) + "\n", encoding='utf-8')
    except OSError as e:
        raise OutputError(f"cannot write network dump: {e}", path=path) from e
    logger.info("network dumped", path=str(path), records=len(lines))
    return path
