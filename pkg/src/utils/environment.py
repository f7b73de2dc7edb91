#\utils.environment.py
import configparser
import os
from functools import lru_cache
from pathlib import Path
from typing import Any, Optional

from dotenv import load_dotenv


def _coerce(value: str) -> Any:
    """ini の文字列を int / float / bool に変換します（該当しなければそのまま）"""
    if value.isdigit():
        return int(value)
    if value.replace('.', '', 1).isdigit():
        return float(value)
    if value.lower() in ('true', 'false'):
        return value.lower() == 'true'
    return value


@lru_cache(maxsize=None)
def _read_config(config_path: Path) -> configparser.ConfigParser:
    config = configparser.ConfigParser()
    config.read(config_path, encoding='utf-8')
    return config


class EnvironmentUtils:
    """
    pastel の設定を読み込むユーティリティクラス

    優先順位は 環境変数 > config/settings.ini > 組み込みのデフォルト値 です。
    config/secrets.env があれば起動時に環境変数として読み込みます。
    """

    BASE_DIR = Path(__file__).resolve().parent.parent.parent

    @staticmethod
    def get_project_root() -> Path:
        return EnvironmentUtils.BASE_DIR

    @staticmethod
    def load_env(env_file: Optional[Path] = None) -> bool:
        """
        .env ファイルを読み込みます。pastel では必須ではありません。

        Args:
            env_file (Optional[Path]): 省略時は config/secrets.env

        Returns:
            bool: ファイルを読み込んだ場合は True
        """
        env_file = env_file or (EnvironmentUtils.BASE_DIR / "config" / "secrets.env")
        if not env_file.exists():
            return False
        load_dotenv(env_file)
        return True

    @staticmethod
    def get_config_value(section: str, key: str, default: Optional[Any] = None) -> Any:
        """
        config/settings.ini の値を型変換して返します。

        ファイル・セクション・キーのどれかがなければ default を返します。
        """
        config_path = EnvironmentUtils.BASE_DIR / "config" / "settings.ini"
        if not config_path.exists():
            return default
        config = _read_config(config_path)
        if not config.has_option(section, key):
            return default
        return _coerce(config.get(section, key))

    @staticmethod
    def resolve_path(path: str) -> Path:
        """
        プロジェクトルートからの相対パスを絶対パスにします。

        Raises:
            FileNotFoundError: パスが存在しない場合
        """
        resolved_path = Path(path)
        if not resolved_path.is_absolute():
            resolved_path = EnvironmentUtils.BASE_DIR / resolved_path
        if not resolved_path.exists():
            raise FileNotFoundError(f"パスが存在しません: {resolved_path}")
        return resolved_path

    @staticmethod
    def get_environment() -> str:
        """実行環境（APP_ENV、デフォルトは development）"""
        return os.getenv("APP_ENV", "development")

    @staticmethod
    def get_catalog_dir() -> Path:
        """
        カタログのディレクトリを取得します。
        環境変数 PASTEL_CATALOG_DIR が設定ファイルの [CATALOG] directory より優先されます。

        Returns:
            Path: カタログディレクトリの絶対パス
        """
        directory = os.getenv("PASTEL_CATALOG_DIR") or EnvironmentUtils.get_config_value("CATALOG", "directory", default="data/catalog")
        return EnvironmentUtils.resolve_path(str(directory))

    @staticmethod
    def get_nerve_max_dim() -> int:
        """CLI の nerve 出力で表示する最大次元（[NERVE] max_dim）"""
        return int(EnvironmentUtils.get_config_value("NERVE", "max_dim", default=5))

    @staticmethod
    def get_anodyne_max_states() -> int:
        """証明書探索で訪れる状態数の上限（[ANODYNE] max_states）"""
        return int(EnvironmentUtils.get_config_value("ANODYNE", "max_states", default=200000))

    @staticmethod
    def get_twocat_max_dim() -> int:
        """2-圏の写像圏の神経を切り詰める次元（[TWOCAT] max_dim）"""
        return int(EnvironmentUtils.get_config_value("TWOCAT", "max_dim", default=3))

    @staticmethod
    def get_dot_binary() -> str:
        """
        Graphviz の dot コマンドを取得します。
        環境変数 PASTEL_DOT が設定ファイルの [RENDER] dot_binary より優先されます。
        """
        return os.getenv("PASTEL_DOT") or str(EnvironmentUtils.get_config_value("RENDER", "dot_binary", default="dot"))
