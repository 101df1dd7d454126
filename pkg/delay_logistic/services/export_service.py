"""
Writers for the lab's file formats: trajectory CSV, its JSON sidecar,
the stability-chart CSV and suite reports.
"""
import json
import logging
from pathlib import Path
from typing import IO, List, Optional, Union

import numpy as np
import pandas as pd

from .integrator_service import RatioObservation, Trajectory
from .scenario_service import SuiteReport, jsonable

logger = logging.getLogger(__name__)

Target = Union[str, Path, IO[str]]


class ExportService:
    """Builds frames and documents and writes them to paths or streams."""

    def trajectory_frame(self, tr: Trajectory, dt: float, z_tr: Optional[Trajectory] = None) -> pd.DataFrame:
        """
        One row per sample at spacing dt over the covered span. With a
        deviation trajectory the z column holds its values where it covers t.
        """
        ts = tr.sample_times(dt)
        frame = pd.DataFrame({'t': ts, 'x': tr.eval_many(ts)})
        if z_tr is not None:
            covered = np.array([z_tr.covers(t) for t in ts], dtype=bool)
            z = np.full(ts.shape, np.nan)
            if covered.any():
                z[covered] = z_tr.eval_many(ts[covered])
            frame['z'] = z
        return frame

    def sidecar(self, tr: Trajectory, ratio: Optional[RatioObservation] = None) -> dict:
        blowup = tr.blowup
        data = {
            'status': tr.status.value,
            't_blowup': blowup.t_blowup if blowup else None,
            'bracket_width': blowup.bracket_width if blowup else None,
            'lower_bound_prop3': blowup.lower_bound if blowup else None,
            't_end': tr.t_final,
            'abort_reason': tr.abort_reason,
            'n_steps': tr.n_steps,
        }
        if ratio is not None:
            data['ratio_sign_changes'] = ratio.sign_changes
            data['ratio_last_change_t'] = ratio.last_change_t
        return jsonable(data)

    def report_document(self, reports: List[SuiteReport]) -> dict:
        if len(reports) == 1:
            return reports[0].as_dict()
        return {
            'suites': [report.as_dict() for report in reports],
            'overall_pass': all(report.overall_pass for report in reports),
        }

    def csv_text(self, frame: pd.DataFrame) -> str:
        return frame.to_csv(index=False, na_rep='', lineterminator='\n')

    def json_text(self, data: dict) -> str:
        return json.dumps(jsonable(data), indent=2, allow_nan=False) + '\n'

    def write_csv(self, frame: pd.DataFrame, target: Target) -> None:
        self._write(self.csv_text(frame), target)
        self._log_target('CSV', target, len(frame))

    def write_json(self, data: dict, target: Target) -> None:
        self._write(self.json_text(data), target)
        self._log_target('JSON', target)

    def sidecar_path(self, out: Union[str, Path]) -> Path:
        return Path(out).with_suffix('.json')

    @staticmethod
    def _write(text: str, target: Target) -> None:
        if isinstance(target, (str, Path)):
            Path(target).write_text(text, encoding='utf-8')
        else:
            target.write(text)

    @staticmethod
    def _log_target(kind: str, target: Target, rows: Optional[int] = None) -> None:
        if isinstance(target, (str, Path)):
            suffix = '' if rows is None else f" ({rows} rows)"
            logger.info(f"Wrote {kind} to {target}{suffix}")
