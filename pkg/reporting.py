"""
Tabular summaries of acceptance results
"""

import os

import pandas as pd


class AcceptanceAnalyzer:
    """Turns acceptance results into a DataFrame and prints a summary"""

    COLUMNS = ["criterion", "title", "passed", "checks", "failures", "findings", "seconds"]

    def __init__(self, results):
        self.results = list(results)

    def to_dataframe(self, timing=False):
        rows = []
        for result in self.results:
            rows.append({
                "criterion": result["criterion"],
                "title": result["title"],
                "passed": bool(result["passed"]),
                "checks": result["checks"],
                "failures": len(result["failures"]),
                "findings": len(result["findings"]),
                "seconds": result.get("seconds", 0.0),
            })
        frame = pd.DataFrame(rows, columns=self.COLUMNS)
        frame = frame.sort_values("criterion").reset_index(drop=True)
        if not timing:
            frame = frame.drop(columns=["seconds"])
        return frame

    def summary(self):
        frame = self.to_dataframe()
        return {
            "criteria": int(len(frame)),
            "passed": int(frame["passed"].sum()),
            "failed": int((~frame["passed"]).sum()),
            "checks": int(frame["checks"].sum()),
            "findings": int(frame["findings"].sum()),
        }

    def print_summary(self, stream=None):
        frame = self.to_dataframe()
        summary = self.summary()
        lines = [
            "",
            "ACCEPTANCE SUMMARY",
            "=" * 60,
            frame.to_string(index=False),
            "=" * 60,
            f"{summary['passed']}/{summary['criteria']} criteria passed, "
            f"{summary['checks']:,} checks, {summary['findings']} findings",
        ]
        text = "\n".join(lines)
        if stream is not None:
            print(text, file=stream)
        return text

    def save_csv(self, path, timing=False):
        directory = os.path.dirname(path)
        if directory:
            os.makedirs(directory, exist_ok=True)
        self.to_dataframe(timing).to_csv(path, index=False)
        return path
