"""
命令行入口与实验配置 | Command-line entry and experiment configuration
"""
