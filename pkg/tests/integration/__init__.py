# filename: __init__.py.py
# @Time    : 2024/4/17 11:07
# @Author  : JQQ
# @Email   : jqq1716@gmail.com
# @Software: PyCharm
