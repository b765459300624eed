# filename: __init__.py.py
# @Time    : 2024/4/16 19:29
# @Author  : JQQ
# @Email   : jqq1716@gmail.com
# @Software: PyCharm
