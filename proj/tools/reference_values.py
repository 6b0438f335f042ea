# Independent high-precision evaluation of the closed-form potential and
# expanded voltage. The printed values are frozen into tests/test_forward_map.cpp.
# Usage: python3 tools/reference_values.py
import sympy as sp
x,y=sp.symbols('x y', real=True)
def U0(pp,pm):
    return sp.log(((x-sp.cos(pp))**2+(y-sp.sin(pp))**2)/((x-sp.cos(pm))**2+(y-sp.sin(pm))**2))
pp,pm=sp.Integer(0),sp.pi/2
b1,b2=sp.Rational(452,1000),sp.Rational(-165,1000)
A,r,xi=sp.Rational(25,1000),sp.Rational(2323,1000),sp.Rational(864,1000)
U=U0(pp,pm)
print("U0", sp.N(U.subs({x:b1,y:b2}),30))
P=sp.diff(U,x)**2+sp.diff(U,y)**2
H=sp.Matrix([[sp.diff(P,x,2),sp.diff(P,x,y)],[sp.diff(P,x,y),sp.diff(P,y,2)]]).subs({x:b1,y:b2})
u=sp.Matrix([sp.cos(xi),sp.sin(xi)]); v=sp.Matrix([-sp.sin(xi),sp.cos(xi)])
V=A*P.subs({x:b1,y:b2})+A**2*r/(2*sp.pi)*(u.T*H*u)[0]+A**2/(2*sp.pi*r)*(v.T*H*v)[0]
print("P", sp.N(P.subs({x:b1,y:b2}),30))
print("V", sp.N(V,30))
# full forward map at uniform electrodes
phis=[0,sp.pi/2,sp.pi,3*sp.pi/2]
pairs=[(0,1),(0,2),(0,3),(1,2),(1,3),(2,3)]
for a,b in pairs:
    U=U0(phis[a],phis[b]); P=sp.diff(U,x)**2+sp.diff(U,y)**2
    H=sp.Matrix([[sp.diff(P,x,2),sp.diff(P,x,y)],[sp.diff(P,x,y),sp.diff(P,y,2)]]).subs({x:b1,y:b2})
    V=A*P.subs({x:b1,y:b2})+A**2*r/(2*sp.pi)*(u.T*H*u)[0]+A**2/(2*sp.pi*r)*(v.T*H*v)[0]
    print(a+1,b+1, sp.N(V,25))
