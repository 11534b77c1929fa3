"""設定ファイルと CSV 出力"""
