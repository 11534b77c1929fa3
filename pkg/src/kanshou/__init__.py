"""kanshou: 重力誘起エンタングルメント（BMV）二重干渉計シミュレータ"""

__version__ = "0.1.0"
