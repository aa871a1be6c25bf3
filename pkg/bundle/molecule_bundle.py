"""
Встроенный набор молекул: 31 алкан, 20 PAH и 14 изомеров октана.

Данные лежат в директории data/:
1. graphs/<family>/<name>.graph - скелеты молекул (формат списка ребер)
2. properties.csv - температура плавления и разбиение train/test
3. reference.csv - опубликованные GP, W и |Aut| (как напечатано)
4. errata.csv - опубликованные значения, которые не может дать ни один
   граф, согласованный с остальными значениями строки

MoleculeBundle инкапсулирует чтение этих файлов, кэширование и проверку
закодированных скелетов по опубликованным значениям.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from pathlib import Path
from typing import Dict, List, Optional, Tuple, Union

import pandas as pd

from config import settings
from loader import (
    GraphFormatError,
    load_errata,
    load_graph_file,
    load_predictions,
    load_properties,
    load_reference,
)
from molgraph import DescriptorRecord, GraphError, MolecularGraph, descriptor_record

logger = logging.getLogger(__name__)


class BundleError(ValueError):
    """Нарушено свойство семейства или неизвестное имя семейства/молекулы."""


class Family(str, Enum):
    ALKANE = "alkane"
    PAH = "pah"
    OCTANE_ISOMER = "octane_isomer"

    @property
    def label(self) -> str:
        return {"alkane": "alkanes", "pah": "PAHs", "octane_isomer": "octane isomers"}[self.value]


class Split(str, Enum):
    TRAIN = "train"
    TEST = "test"
    ALL = "all"


FamilyLike = Union[Family, str]


def parse_family(value: FamilyLike) -> Family:
    if isinstance(value, Family):
        return value
    try:
        return Family(str(value).strip().lower())
    except ValueError:
        choices = ", ".join(f.value for f in Family)
        raise BundleError(f"Неизвестное семейство {value!r}; доступны: {choices}")


@dataclass(frozen=True)
class MoleculeEntry:
    name: str
    graph: MolecularGraph
    melting_point: float
    family: Family
    split: Split


@dataclass(frozen=True)
class ReferenceValues:
    name: str
    gp: Fraction
    wiener: Optional[int]
    aut_order: Optional[int]
    source_table: str


@dataclass(frozen=True)
class Erratum:
    name: str
    family: Family
    field: str
    published: str
    corrected: str
    note: str


@dataclass(frozen=True)
class MoleculeCheck:
    """Результат сверки одной молекулы с опубликованными значениями."""

    name: str
    family: Family
    passed: bool
    mismatches: Tuple[str, ...] = ()
    errata: Tuple[str, ...] = ()
    record: Optional[DescriptorRecord] = None
    error: Optional[str] = None


@dataclass(frozen=True)
class VerificationReport:
    checks: Tuple[MoleculeCheck, ...]

    @property
    def ok(self) -> bool:
        return all(check.passed for check in self.checks)

    def families(self) -> List[Family]:
        seen: List[Family] = []
        for check in self.checks:
            if check.family not in seen:
                seen.append(check.family)
        return seen

    def total(self, family: FamilyLike) -> int:
        family = parse_family(family)
        return sum(1 for c in self.checks if c.family == family)

    def passed_count(self, family: FamilyLike) -> int:
        family = parse_family(family)
        return sum(1 for c in self.checks if c.family == family and c.passed)

    def failures(self) -> List[MoleculeCheck]:
        return [c for c in self.checks if not c.passed]

    def errata_applied(self) -> List[MoleculeCheck]:
        return [c for c in self.checks if c.errata]

    def summary_line(self) -> str:
        """Например: "alkanes 31/31, PAHs 20/20, octane isomers 14/14"."""
        return ", ".join(
            f"{f.label} {self.passed_count(f)}/{self.total(f)}" for f in self.families()
        )

    def to_dict(self) -> Dict:
        return {
            "ok": self.ok,
            "summary": self.summary_line(),
            "families": {
                f.value: {"passed": self.passed_count(f), "total": self.total(f)}
                for f in self.families()
            },
            "molecules": [
                {
                    "name": c.name,
                    "family": c.family.value,
                    "passed": c.passed,
                    "mismatches": list(c.mismatches),
                    "errata": list(c.errata),
                    "error": c.error,
                    "descriptors": c.record.to_dict() if c.record else None,
                }
                for c in self.checks
            ],
        }


class MoleculeBundle:
    """
    Класс для работы с набором молекул на диске.
    Инкапсулирует чтение графов и таблиц, кэширование и сверку.
    """

    def __init__(
        self,
        data_directory: Optional[Union[str, Path]] = None,
        workers: Optional[int] = None
    ):
        """
        Args:
            data_directory: Директория с данными (по умолчанию из настроек)
            workers: Число потоков для расчета дескрипторов
        """
        self.data_directory = Path(data_directory) if data_directory else settings.data_dir
        self.workers = workers or settings.workers
        self._entries: Dict[Family, List[MoleculeEntry]] = {}
        self._properties: Optional[pd.DataFrame] = None
        self._reference: Optional[pd.DataFrame] = None
        self._errata: Optional[pd.DataFrame] = None
        self._predictions: Optional[pd.DataFrame] = None

        if not self.data_directory.is_dir():
            raise FileNotFoundError(f"Директория данных не найдена: {self.data_directory}")
        logger.debug("Набор молекул: %s", self.data_directory)

    def _get_graph_path(self, family: Family, name: str) -> Path:
        return self.data_directory / "graphs" / family.value / f"{name}.graph"

    def _get_properties_path(self) -> Path:
        return self.data_directory / "properties.csv"

    def _get_reference_path(self) -> Path:
        return self.data_directory / "reference.csv"

    def _get_errata_path(self) -> Path:
        return self.data_directory / "errata.csv"

    def _get_predictions_path(self) -> Path:
        return self.data_directory / "predictions.csv"

    @property
    def properties(self) -> pd.DataFrame:
        if self._properties is None:
            self._properties = load_properties(self._get_properties_path())
        return self._properties

    @property
    def reference(self) -> pd.DataFrame:
        if self._reference is None:
            self._reference = load_reference(self._get_reference_path())
        return self._reference

    @property
    def errata_table(self) -> pd.DataFrame:
        if self._errata is None:
            self._errata = load_errata(self._get_errata_path())
        return self._errata

    @property
    def printed_predictions(self) -> pd.DataFrame:
        """Напечатанные MP-hat таблиц 2, 3 и 5."""
        if self._predictions is None:
            self._predictions = load_predictions(self._get_predictions_path())
        return self._predictions

    def load_graph(self, family: FamilyLike, name: str) -> MolecularGraph:
        return load_graph_file(self._get_graph_path(parse_family(family), name))

    def load_family(self, family: FamilyLike) -> List[MoleculeEntry]:
        """
        Загружает все молекулы семейства в порядке строк properties.csv.

        Raises:
            BundleError: нарушено свойство семейства (дерево/циклы)
            GraphFormatError, GraphError: файл графа некорректен
        """
        family = parse_family(family)
        if family in self._entries:
            return list(self._entries[family])

        rows = self.properties[self.properties["family"] == family.value]
        entries = []
        for name, split, mp in zip(rows["name"], rows["split"], rows["mp"]):
            try:
                split_value = Split(split)
            except ValueError:
                raise BundleError(f"{name}: неизвестное разбиение {split!r}")
            entry = MoleculeEntry(
                name=name,
                graph=self.load_graph(family, name),
                melting_point=float(mp),
                family=family,
                split=split_value,
            )
            _check_family_invariants(entry)
            entries.append(entry)

        self._entries[family] = entries
        logger.info("Загружено %d молекул семейства %s", len(entries), family.value)
        return list(entries)

    def entry(self, family: FamilyLike, name: str) -> MoleculeEntry:
        for item in self.load_family(family):
            if item.name == name:
                return item
        raise BundleError(f"Молекула {name!r} не найдена в семействе {parse_family(family).value}")

    def reference_values(self, family: FamilyLike) -> Dict[str, ReferenceValues]:
        """Опубликованные значения дескрипторов семейства, как напечатано."""
        family = parse_family(family)
        rows = self.reference[self.reference["family"] == family.value]
        return {
            name: ReferenceValues(
                name=name,
                gp=Fraction(gp),
                wiener=int(w) if w else None,
                aut_order=int(aut) if aut else None,
                source_table=source,
            )
            for name, gp, w, aut, source in zip(
                rows["name"], rows["gp"], rows["wiener"], rows["aut_order"], rows["source_table"]
            )
        }

    def errata(self, family: FamilyLike) -> Dict[Tuple[str, str], Erratum]:
        family = parse_family(family)
        rows = self.errata_table[self.errata_table["family"] == family.value]
        return {
            (name, field): Erratum(name, family, field, published, corrected, note)
            for name, field, published, corrected, note in zip(
                rows["name"], rows["field"], rows["published"], rows["corrected"], rows["note"]
            )
        }

    def descriptor_records(self, family: FamilyLike) -> List[DescriptorRecord]:
        """Дескрипторы всех молекул семейства; порядок - порядок набора."""
        entries = self.load_family(family)
        with ThreadPoolExecutor(max_workers=self.workers) as executor:
            return list(executor.map(lambda e: descriptor_record(e.graph, name=e.name), entries))

    def descriptor_table(self, family: FamilyLike, source: str = "published") -> pd.DataFrame:
        """
        Таблица для регрессии: name, split, mp, gp, wiener, aut.

        Args:
            family: Семейство
            source: "published" - значения, как напечатаны в таблицах
                    (по ним построены опубликованные модели);
                    "computed" - значения, вычисленные по графам
        """
        family = parse_family(family)
        rows = self.properties[self.properties["family"] == family.value]
        table = pd.DataFrame({
            "name": list(rows["name"]),
            "split": list(rows["split"]),
            "mp": [float(v) for v in rows["mp"]],
        })

        if source == "published":
            reference = self.reference_values(family)
            missing = [n for n in table["name"] if n not in reference]
            if missing:
                raise BundleError(f"Нет опубликованных значений для: {', '.join(missing)}")
            table["gp"] = [float(reference[n].gp) for n in table["name"]]
            table["wiener"] = [
                float(reference[n].wiener) if reference[n].wiener is not None else float("nan")
                for n in table["name"]
            ]
            table["aut"] = [
                float(reference[n].aut_order) if reference[n].aut_order is not None else float("nan")
                for n in table["name"]
            ]
        elif source == "computed":
            records = self.descriptor_records(family)
            table["gp"] = [float(r.gp) for r in records]
            table["wiener"] = [float(r.wiener) for r in records]
            table["aut"] = [float(r.aut_order) for r in records]
        else:
            raise BundleError(f"Неизвестный источник дескрипторов {source!r}: published или computed")

        return table

    def verify(self, family: Optional[FamilyLike] = None) -> VerificationReport:
        """
        Сверяет вычисленные дескрипторы с опубликованными.

        GP сравнивается для всех таблиц, W и |Aut| - там, где они напечатаны.
        Если для значения есть запись в errata.csv, сравнение идет с
        исправленным значением, а запись попадает в отчет.
        Ошибки чтения графа не прерывают проверку: молекула помечается
        как непрошедшая.
        """
        families = [parse_family(family)] if family is not None else list(Family)
        tasks = []
        for fam in families:
            errata = self.errata(fam)
            for ref in self.reference_values(fam).values():
                tasks.append((fam, ref, errata))

        with ThreadPoolExecutor(max_workers=self.workers) as executor:
            checks = list(executor.map(lambda task: self._check_molecule(*task), tasks))

        report = VerificationReport(checks=tuple(checks))
        for check in report.failures():
            logger.warning("%s/%s: %s", check.family.value, check.name,
                           check.error or "; ".join(check.mismatches))
        return report

    def _check_molecule(
        self,
        family: Family,
        ref: ReferenceValues,
        errata: Dict[Tuple[str, str], Erratum]
    ) -> MoleculeCheck:
        try:
            graph = self.load_graph(family, ref.name)
            record = descriptor_record(graph, name=ref.name)
        except (GraphFormatError, GraphError, FileNotFoundError) as e:
            return MoleculeCheck(name=ref.name, family=family, passed=False, error=str(e))

        expected = {"gp": ref.gp, "wiener": ref.wiener, "aut_order": ref.aut_order}
        computed = {"gp": record.gp, "wiener": record.wiener, "aut_order": record.aut_order}

        mismatches = []
        notes = []
        for field, published in expected.items():
            if published is None:
                continue
            target = published
            erratum = errata.get((ref.name, field))
            if erratum is not None:
                target = Fraction(erratum.corrected) if field == "gp" else int(erratum.corrected)
                notes.append(f"{field}: напечатано {erratum.published}, исправлено на {erratum.corrected}")
            if computed[field] != target:
                mismatches.append(f"{field}: вычислено {computed[field]}, ожидалось {target}")

        return MoleculeCheck(
            name=ref.name,
            family=family,
            passed=not mismatches,
            mismatches=tuple(mismatches),
            errata=tuple(notes),
            record=record,
        )

    def get_bundle_stats(self) -> Dict:
        """Число молекул и размеры разбиений по семействам."""
        stats = {"data_directory": str(self.data_directory), "families": {}}
        for family in Family:
            rows = self.properties[self.properties["family"] == family.value]
            counts = rows["split"].value_counts()
            stats["families"][family.value] = {
                "count": int(len(rows)),
                **{split.value: int(counts.get(split.value, 0)) for split in Split},
            }
        return stats


def _check_family_invariants(entry: MoleculeEntry) -> None:
    graph = entry.graph
    if entry.family in (Family.ALKANE, Family.OCTANE_ISOMER):
        if not graph.is_tree():
            raise BundleError(f"{entry.name}: скелет алкана должен быть деревом")
        if graph.max_degree() > 4:
            raise BundleError(f"{entry.name}: степень вершины больше 4")
        if entry.family == Family.OCTANE_ISOMER and graph.vertex_count != 8:
            raise BundleError(f"{entry.name}: у изомера октана 8 атомов углерода")
    elif entry.family == Family.PAH and graph.is_tree():
        raise BundleError(f"{entry.name}: у PAH должны быть циклы")


_default_bundle: Optional[MoleculeBundle] = None


def default_bundle() -> MoleculeBundle:
    global _default_bundle
    if _default_bundle is None:
        _default_bundle = MoleculeBundle()
    return _default_bundle


def bundled_family(family: FamilyLike, bundle: Optional[MoleculeBundle] = None) -> List[MoleculeEntry]:
    """31 алкан, 20 PAH или 14 изомеров октана с графами, MP и разбиением."""
    return (bundle or default_bundle()).load_family(family)


def verify_bundle(
    family: Optional[FamilyLike] = None,
    bundle: Optional[MoleculeBundle] = None
) -> VerificationReport:
    """Сверка всего набора (или одного семейства) с опубликованными значениями."""
    return (bundle or default_bundle()).verify(family)
